#include "fusion/rules.hpp"

#include <algorithm>
#include <cctype>

namespace fusion {

namespace {

using FocalRef = const std::pair<const SetElement, double>*;

void require_sources(std::span<const Bba> bbas, std::string_view rule) {
  if (bbas.size() < 2) {
    throw Error(std::string(rule) + " needs at least 2 sources, got " + std::to_string(bbas.size()));
  }
  for (const auto& b : bbas) {
    if (!(b.frame() == bbas.front().frame())) {
      throw Error(std::string(rule) + ": sources belong to different frames");
    }
  }
}

// Calls `visit` once per tuple of focal elements (one per source), in
// lexicographic order of the sources' canonical focal orderings.
template <typename Visit>
void for_each_tuple(std::span<const Bba> bbas, Visit&& visit) {
  std::vector<FocalRef> tuple(bbas.size());
  auto recurse = [&](auto&& self, std::size_t i) -> void {
    if (i == bbas.size()) {
      visit(std::as_const(tuple));
      return;
    }
    for (const auto& entry : bbas[i].focal()) {
      tuple[i] = &entry;
      self(self, i + 1);
    }
  };
  recurse(recurse, 0);
}

double tuple_product(const std::vector<FocalRef>& tuple) {
  double p = 1.0;
  for (auto* f : tuple) p *= f->second;
  return p;
}

std::map<SetElement, Cell> assemble(std::map<SetElement, std::vector<ProductTerm>> grouped) {
  std::map<SetElement, Cell> cells;
  for (auto& [key, terms] : grouped) {
    std::sort(terms.begin(), terms.end(),
              [](const ProductTerm& a, const ProductTerm& b) { return a.focals < b.focals; });
    Cell cell;
    for (const auto& t : terms) cell.mass += t.product;
    cell.terms = std::move(terms);
    cells.emplace(key, std::move(cell));
  }
  return cells;
}

// Model-canonical destination; model-empty destinations fall back to I.
SetElement settle(const Frame& model, const SetElement& free_element) {
  auto target = model.project(free_element);
  return target.is_empty() ? model.total_ignorance() : target;
}

}  // namespace

// ---------------------------------------------------------------------------
// Conjunctive

ConjunctiveResult::ConjunctiveResult(FramePtr model, std::size_t source_count,
                                     std::map<SetElement, Cell> cells)
    : model_(std::move(model)), source_count_(source_count), cells_(std::move(cells)) {}

double ConjunctiveResult::total() const {
  double sum = 0.0;
  for (const auto& [_, c] : cells_) sum += c.mass;
  return sum;
}

bool ConjunctiveResult::is_model_empty(const SetElement& cell) const {
  return model_->project(cell).is_empty();
}

Bba ConjunctiveResult::flatten() const {
  Bba out(free_frame());
  for (const auto& [key, c] : cells_) out.add(key, c.mass);
  return out;
}

ConjunctiveResult singleton_result(const Bba& bba, FramePtr model) {
  if (!model) model = bba.frame_ptr();
  if (!bba.frame().same_family(*model)) throw Error("source does not belong to the model's frame");
  const auto free = model->free_model();
  std::map<SetElement, std::vector<ProductTerm>> grouped;
  for (const auto& [x, m] : bba.focal()) {
    auto key = free->project(x);
    grouped[key].push_back(ProductTerm{{key}, {m}, m});
  }
  return ConjunctiveResult(std::move(model), 1, assemble(std::move(grouped)));
}

ConjunctiveResult extend(const ConjunctiveResult& acc, const Bba& next) {
  if (!next.frame().same_family(*acc.model())) {
    throw Error("source does not belong to the model's frame");
  }
  const auto free = acc.free_frame();
  std::vector<std::pair<SetElement, double>> focals;
  for (const auto& [y, m] : next.focal()) focals.emplace_back(free->project(y), m);

  std::map<SetElement, std::vector<ProductTerm>> grouped;
  for (const auto& [key, cell] : acc.cells()) {
    for (const auto& [y, m] : focals) {
      const auto meet = set_intersect(key, y);
      auto& bucket = grouped[meet];
      for (const auto& term : cell.terms) {
        ProductTerm t = term;
        t.focals.push_back(y);
        t.masses.push_back(m);
        t.product = term.product * m;
        bucket.push_back(std::move(t));
      }
    }
  }
  return ConjunctiveResult(acc.model(), acc.source_count() + 1, assemble(std::move(grouped)));
}

ConjunctiveResult conjunctive(std::span<const Bba> bbas, FramePtr model) {
  if (bbas.size() < 2) {
    throw Error("conjunctive rule needs at least 2 sources, got " + std::to_string(bbas.size()));
  }
  if (!model) model = bbas.front().frame_ptr();
  auto acc = singleton_result(bbas.front(), model);
  for (std::size_t i = 1; i < bbas.size(); ++i) acc = extend(acc, bbas[i]);
  return acc;
}

// ---------------------------------------------------------------------------
// Rules without conflict transfer

Bba disjunctive(std::span<const Bba> bbas) {
  require_sources(bbas, "disjunctive rule");
  const auto& frame = bbas.front().frame();
  Bba out(bbas.front().frame_ptr());
  for_each_tuple(bbas, [&](const std::vector<FocalRef>& tuple) {
    auto m = frame.empty().minterms();
    for (auto* f : tuple) m |= f->first.minterms();
    out.add(frame.canonicalize(std::move(m)), tuple_product(tuple));
  });
  return out;
}

Bba exclusive_disjunctive(std::span<const Bba> bbas) {
  require_sources(bbas, "exclusive disjunctive rule");
  const auto& frame = bbas.front().frame();
  if (frame.mode() != ClosureMode::SuperPowerSet) {
    throw Error("exclusive disjunctive rule needs complements (super-power-set mode)");
  }
  Bba out(bbas.front().frame_ptr());
  for_each_tuple(bbas, [&](const std::vector<FocalRef>& tuple) {
    auto result = frame.empty().minterms();
    for (std::size_t i = 0; i < tuple.size(); ++i) {
      auto only_i = tuple[i]->first.minterms();
      for (std::size_t j = 0; j < tuple.size(); ++j) {
        if (j != i) only_i.subtract(tuple[j]->first.minterms());
      }
      result |= only_i;
    }
    out.add(frame.canonicalize(std::move(result)), tuple_product(tuple));
  });
  return out;
}

SourceTree SourceTree::parse(std::string_view text) {
  SourceTree tree;
  tree.text_ = std::string(text);
  std::size_t pos = 0;
  auto skip = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto fail = [&](const std::string& msg) -> void { throw ParseError(pos, msg); };

  std::function<int()> parse_or;
  std::function<int()> parse_and;
  std::function<int()> parse_leaf = [&]() -> int {
    skip();
    if (pos < text.size() && text[pos] == '(') {
      ++pos;
      int inner = parse_or();
      skip();
      if (pos >= text.size() || text[pos] != ')') fail("expected ')'");
      ++pos;
      return inner;
    }
    if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos]))) {
      fail("expected a source index");
    }
    std::size_t value = 0;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      value = value * 10 + static_cast<std::size_t>(text[pos] - '0');
      ++pos;
    }
    if (value == 0) fail("source indices start at 1");
    tree.nodes_.push_back({0, value, -1, -1});
    return static_cast<int>(tree.nodes_.size() - 1);
  };
  auto binary = [&](char op, const std::function<int()>& operand) {
    int lhs = operand();
    while (true) {
      skip();
      if (pos >= text.size() || text[pos] != op) return lhs;
      ++pos;
      int rhs = operand();
      tree.nodes_.push_back({op, 0, lhs, rhs});
      lhs = static_cast<int>(tree.nodes_.size() - 1);
    }
  };
  parse_and = [&] { return binary('&', parse_leaf); };
  parse_or = [&] { return binary('|', parse_and); };

  tree.root_ = parse_or();
  skip();
  if (pos != text.size()) fail("unexpected trailing input");
  return tree;
}

void SourceTree::validate(std::size_t source_count) const {
  std::vector<int> seen(source_count + 1, 0);
  for (const auto& n : nodes_) {
    if (n.op != 0) continue;
    if (n.leaf > source_count) {
      throw Error("mixed tree references source " + std::to_string(n.leaf) + " but only " +
                  std::to_string(source_count) + " are given");
    }
    if (++seen[n.leaf] > 1) {
      throw Error("mixed tree uses source " + std::to_string(n.leaf) + " more than once");
    }
  }
  for (std::size_t i = 1; i <= source_count; ++i) {
    if (seen[i] == 0) throw Error("mixed tree does not use source " + std::to_string(i));
  }
}

MintermSet SourceTree::eval_node(int node, std::span<const SetElement> focals) const {
  const auto& n = nodes_[static_cast<std::size_t>(node)];
  if (n.op == 0) return focals[n.leaf - 1].minterms();
  auto lhs = eval_node(n.left, focals);
  const auto rhs = eval_node(n.right, focals);
  return n.op == '&' ? (lhs &= rhs) : (lhs |= rhs);
}

MintermSet SourceTree::evaluate(std::span<const SetElement> focals) const {
  return eval_node(root_, focals);
}

Bba mixed(std::span<const Bba> bbas, const SourceTree& tree) {
  require_sources(bbas, "mixed rule");
  tree.validate(bbas.size());
  const auto& frame = bbas.front().frame();
  Bba out(bbas.front().frame_ptr());
  std::vector<SetElement> focals(bbas.size());
  for_each_tuple(bbas, [&](const std::vector<FocalRef>& tuple) {
    for (std::size_t i = 0; i < tuple.size(); ++i) focals[i] = tuple[i]->first;
    out.add(frame.canonicalize(tree.evaluate(focals)), tuple_product(tuple));
  });
  return out;
}

Bba murphy_average(std::span<const Bba> bbas) {
  require_sources(bbas, "Murphy's rule");
  std::map<SetElement, double> sums;
  for (const auto& b : bbas) {
    for (const auto& [x, m] : b.focal()) sums[x] += m;
  }
  Bba out(bbas.front().frame_ptr());
  for (const auto& [x, s] : sums) out.add(x, s / static_cast<double>(bbas.size()));
  return out;
}

// ---------------------------------------------------------------------------
// Transfers

SetElement union_target(const ProductTerm& term, const SetElement& cell) {
  std::vector<SetElement> minimal;
  for (const auto& x : term.focals) {
    bool strict_superset = false;
    for (const auto& y : term.focals) {
      if (y != x && y.is_subset_of(x)) {
        strict_superset = true;
        break;
      }
    }
    if (!strict_superset && std::find(minimal.begin(), minimal.end(), x) == minimal.end()) {
      minimal.push_back(x);
    }
  }
  const auto& frame = cell.frame();
  auto u = frame.empty().minterms();
  for (const auto& x : minimal) u |= x.minterms();
  if (u != cell.minterms()) return frame.canonicalize(std::move(u));

  // Nested product: fall back to the atoms the cell is built from.
  const auto support = atom_support(cell);
  if (support.empty()) return frame.total_ignorance();
  auto atoms = frame.empty().minterms();
  for (auto i : support) atoms |= frame.atom_minterms(i);
  return frame.canonicalize(std::move(atoms));
}

std::vector<Share> pcr5_shares(const ProductTerm& term) {
  if (term.focals.size() != 2) {
    throw Error("PCR5 redistribution is defined for two sources; product term has " +
                std::to_string(term.focals.size()));
  }
  const double m1 = term.masses[0];
  const double m2 = term.masses[1];
  const double denom = m1 + m2;
  if (denom == 0.0) return {};
  return {{term.focals[0], m1 * term.product / denom}, {term.focals[1], m2 * term.product / denom}};
}

std::string_view to_string(ConflictStrategy strategy) {
  switch (strategy) {
    case ConflictStrategy::DempsterNormalize: return "dempster";
    case ConflictStrategy::YagerToIgnorance: return "yager";
    case ConflictStrategy::TbmToEmpty: return "tbm";
    case ConflictStrategy::DuboisPradeToUnion: return "dubois-prade";
  }
  return "?";
}

Bba transfer_conflict(const ConjunctiveResult& conj, ConflictStrategy strategy) {
  const auto& model = *conj.model();
  Bba out(conj.model());
  double conflict = 0.0;
  for (const auto& [key, cell] : conj.cells()) {
    const auto canon = model.project(key);
    if (!canon.is_empty()) {
      out.add(canon, cell.mass);
      continue;
    }
    switch (strategy) {
      case ConflictStrategy::DempsterNormalize: conflict += cell.mass; break;
      case ConflictStrategy::YagerToIgnorance: out.add(model.total_ignorance(), cell.mass); break;
      case ConflictStrategy::TbmToEmpty: out.add(model.empty(), cell.mass); break;
      case ConflictStrategy::DuboisPradeToUnion:
        for (const auto& term : cell.terms) out.add(settle(model, union_target(term, key)), term.product);
        break;
    }
  }
  if (strategy != ConflictStrategy::DempsterNormalize || conflict == 0.0) return out;
  if (out.total() <= 0.0) throw Error("Dempster's rule is undefined under total conflict");
  return normalize(out);
}

Bba dsm_classic(std::span<const Bba> bbas) {
  if (bbas.empty()) throw Error("DSm classic rule needs sources");
  return conjunctive(bbas, bbas.front().frame().free_model()).flatten();
}

Bba dsm_hybrid(const ConjunctiveResult& conj) {
  return transfer_conflict(conj, ConflictStrategy::DuboisPradeToUnion);
}

Bba pcr5_pair(const Bba& b1, const Bba& b2, FramePtr model, CellPredicate treat_as_empty) {
  const std::vector<Bba> pair{b1, b2};
  const auto conj = conjunctive(pair, std::move(model));
  const auto& frame = *conj.model();
  if (!treat_as_empty) {
    treat_as_empty = [&conj](const SetElement& cell) { return conj.is_model_empty(cell); };
  }
  Bba out(conj.model());
  for (const auto& [key, cell] : conj.cells()) {
    if (!treat_as_empty(key)) {
      out.add(frame.project(key), cell.mass);
      continue;
    }
    for (const auto& term : cell.terms) {
      for (const auto& share : pcr5_shares(term)) out.add(settle(frame, share.element), share.mass);
    }
  }
  return out;
}

}  // namespace fusion
