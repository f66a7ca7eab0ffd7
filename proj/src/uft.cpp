#include "fusion/uft.hpp"

#include <algorithm>
#include <set>

namespace fusion {

std::string_view to_string(World world) { return world == World::Closed ? "closed" : "open"; }

std::string_view to_string(RelationshipCase::Kind kind) {
  using K = RelationshipCase::Kind;
  switch (kind) {
    case K::KeepOnIntersection: return "keep";
    case K::OptimisticBoth: return "pcr5";
    case K::OneRightUnknown: return "union";
    case K::OneRightKnown: return "right";
    case K::Pessimistic: return "pessimistic";
    case K::VeryPessimisticClosed: return "ignorance";
    case K::VeryPessimisticOpen: return "empty";
    case K::BothWrong: return "others";
    case K::NeitherInterests: return "pcr5-nonempty";
  }
  return "?";
}

std::string_view to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::Lower: return "lower";
    case BoundKind::Middle: return "middle";
    case BoundKind::Upper: return "upper";
  }
  return "?";
}

void RelationshipSpec::set(const SetElement& cell, RelationshipCase relationship) {
  const auto free = cell.frame().free_model();
  if (relationship.winner) relationship.winner = free->project(*relationship.winner);
  entries_.insert_or_assign(free->project(cell), std::move(relationship));
}

RelationshipCase resolve_case(const RelationshipSpec& spec, const SetElement& cell,
                              const Frame& model) {
  using K = RelationshipCase::Kind;
  const auto key = model.free_model()->project(cell);
  const bool empty_in_model = model.project(cell).is_empty();
  if (const auto it = spec.entries().find(key); it != spec.entries().end()) {
    if (it->second.kind == K::KeepOnIntersection && empty_in_model && spec.world() == World::Closed) {
      throw Error("cannot keep mass on " + to_string(key) +
                  ": the model declares it empty and the world is closed");
    }
    return it->second;
  }
  return RelationshipCase::of(empty_in_model ? K::Pessimistic : K::KeepOnIntersection);
}

namespace {

class Router {
 public:
  Router(const FramePtr& model, World world) : model_(*model), world_(world), out_(model) {}

  void to(const SetElement& free_element, double mass) {
    auto target = model_.project(free_element);
    if (target.is_empty() && world_ == World::Closed) target = model_.total_ignorance();
    out_.add(target, mass);
  }
  void to_ignorance(double mass) { out_.add(model_.total_ignorance(), mass); }
  void to_empty(double mass) { out_.add(model_.empty(), mass); }
  Bba take() { return std::move(out_); }

 private:
  const Frame& model_;
  World world_;
  Bba out_;
};

void split_to_other_atoms(const ProductTerm& term, const Frame& model, Router& router) {
  std::set<std::size_t> involved;
  for (const auto& x : term.focals) {
    for (auto i : atom_support(x)) involved.insert(i);
  }
  std::vector<std::size_t> others;
  for (std::size_t i = 0; i < model.atom_count(); ++i) {
    if (!involved.contains(i)) others.push_back(i);
  }
  if (others.empty()) {
    throw Error("no hypothesis outside the conflict is left in a closed world; use an open world");
  }
  const auto free = model.free_model();
  const double share = term.product / static_cast<double>(others.size());
  for (auto i : others) router.to(free->atom(i), share);
}

}  // namespace

Bba uft_apply(const ConjunctiveResult& conj, const RelationshipSpec& spec) {
  using K = RelationshipCase::Kind;
  const auto& model = *conj.model();
  for (const auto& [cell, _] : spec.entries()) {
    if (!conj.cells().contains(cell)) {
      throw Error("relationship given for " + to_string(cell) +
                  ", which is not an intersection produced by these sources");
    }
  }

  Router router(conj.model(), spec.world());
  for (const auto& [key, cell] : conj.cells()) {
    const auto rel = resolve_case(spec, key, model);
    switch (rel.kind) {
      case K::KeepOnIntersection:
        if (model.project(key).is_empty()) router.to_empty(cell.mass);
        else router.to(key, cell.mass);
        break;
      case K::OptimisticBoth:
      case K::NeitherInterests:
        for (const auto& term : cell.terms) {
          for (const auto& share : pcr5_shares(term)) router.to(share.element, share.mass);
        }
        break;
      case K::OneRightUnknown:
      case K::Pessimistic:
        for (const auto& term : cell.terms) router.to(union_target(term, key), term.product);
        break;
      case K::OneRightKnown:
        for (const auto& term : cell.terms) {
          if (std::find(term.focals.begin(), term.focals.end(), *rel.winner) == term.focals.end()) {
            throw Error(to_string(*rel.winner) + " does not take part in every product on " +
                        to_string(key));
          }
        }
        router.to(*rel.winner, cell.mass);
        break;
      case K::VeryPessimisticClosed: router.to_ignorance(cell.mass); break;
      case K::VeryPessimisticOpen: router.to_empty(cell.mass); break;
      case K::BothWrong:
        if (spec.world() == World::Open) {
          router.to_empty(cell.mass);
        } else {
          for (const auto& term : cell.terms) split_to_other_atoms(term, model, router);
        }
        break;
    }
  }
  return router.take();
}

Bba uft_combine(std::span<const Bba> bbas, const FramePtr& model, const RelationshipSpec& spec) {
  return uft_apply(conjunctive(bbas, model), spec);
}

namespace {

std::set<SetElement> free_focal_set(const Bba& b1, const Bba& b2) {
  if (!b1.frame().same_family(b2.frame())) throw Error("bound: sources belong to different frames");
  const auto free = b1.frame().free_model();
  std::set<SetElement> focal;
  for (const auto* b : {&b1, &b2}) {
    for (const auto& [x, _] : b->focal()) focal.insert(free->project(x));
  }
  return focal;
}

}  // namespace

Bba bound(const Bba& b1, const Bba& b2, BoundKind kind, World world) {
  const auto focal = free_focal_set(b1, b2);
  const auto free = b1.frame().free_model();
  auto is_intersection = [&focal](const SetElement& cell) { return !focal.contains(cell); };

  if (kind == BoundKind::Upper) return pcr5_pair(b1, b2, free, is_intersection);

  const std::vector<Bba> pair{b1, b2};
  const auto conj = conjunctive(pair, free);
  Bba out(free);
  for (const auto& [key, cell] : conj.cells()) {
    if (!is_intersection(key)) {
      out.add(key, cell.mass);
    } else if (kind == BoundKind::Lower) {
      out.add(world == World::Closed ? free->total_ignorance() : free->empty(), cell.mass);
    } else {
      for (const auto& term : cell.terms) out.add(union_target(term, key), term.product);
    }
  }
  return out;
}

Bba upper_bound_gains(const Bba& b1, const Bba& b2) {
  const auto focal = free_focal_set(b1, b2);
  const auto free = b1.frame().free_model();
  const std::vector<Bba> pair{b1, b2};
  const auto conj = conjunctive(pair, free);
  Bba gains(free);
  for (const auto& [key, cell] : conj.cells()) {
    if (focal.contains(key)) continue;
    for (const auto& term : cell.terms) {
      for (const auto& share : pcr5_shares(term)) gains.add(share.element, share.mass);
    }
  }
  return gains;
}

Bba average_bounds(const Bba& lower, const Bba& upper) {
  if (!(lower.frame() == upper.frame())) throw Error("average_bounds: frame mismatch");
  Bba out(lower.frame_ptr());
  for (const auto& [x, m] : lower.focal()) out.add(x, m / 2.0);
  for (const auto& [x, m] : upper.focal()) out.add(x, m / 2.0);
  return out;
}

}  // namespace fusion
