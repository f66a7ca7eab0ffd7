#include "fusion/algebra.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <functional>
#include <set>
#include <unordered_set>
#include <utility>

namespace fusion {

// ---------------------------------------------------------------------------
// MintermSet

namespace {
constexpr std::size_t kWordBits = 64;

std::size_t word_count(std::size_t bits) { return (bits + kWordBits - 1) / kWordBits; }
}  // namespace

MintermSet::MintermSet(std::size_t size) : size_(size), words_(word_count(size), 0) {}

bool MintermSet::test(std::size_t k) const {
  return (words_[k / kWordBits] >> (k % kWordBits)) & 1U;
}

void MintermSet::set(std::size_t k) { words_[k / kWordBits] |= std::uint64_t{1} << (k % kWordBits); }

void MintermSet::reset(std::size_t k) {
  words_[k / kWordBits] &= ~(std::uint64_t{1} << (k % kWordBits));
}

bool MintermSet::none() const noexcept {
  return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
}

std::size_t MintermSet::count() const noexcept {
  std::size_t n = 0;
  for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

bool MintermSet::is_subset_of(const MintermSet& other) const {
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (words_[i] & ~other.words_[i]) return false;
  }
  return true;
}

bool MintermSet::intersects(const MintermSet& other) const {
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (words_[i] & other.words_[i]) return true;
  }
  return false;
}

MintermSet& MintermSet::operator&=(const MintermSet& other) {
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
  return *this;
}

MintermSet& MintermSet::operator|=(const MintermSet& other) {
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
  return *this;
}

MintermSet& MintermSet::subtract(const MintermSet& other) {
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~other.words_[i];
  return *this;
}

MintermSet MintermSet::flipped() const {
  MintermSet out(*this);
  for (auto& w : out.words_) w = ~w;
  if (const auto tail = size_ % kWordBits; tail != 0 && !out.words_.empty()) {
    out.words_.back() &= (std::uint64_t{1} << tail) - 1;
  }
  return out;
}

MintermSet MintermSet::up_closure() const {
  static constexpr std::uint64_t kLowHalves[6] = {
      0x5555555555555555ULL, 0x3333333333333333ULL, 0x0F0F0F0F0F0F0F0FULL,
      0x00FF00FF00FF00FFULL, 0x0000FFFF0000FFFFULL, 0x00000000FFFFFFFFULL};
  MintermSet out(*this);
  for (std::size_t i = 0; (std::size_t{1} << i) < size_; ++i) {
    if (i < 6) {
      for (auto& w : out.words_) w |= (w & kLowHalves[i]) << (std::size_t{1} << i);
    } else {
      const std::size_t stride = std::size_t{1} << (i - 6);
      for (std::size_t j = 0; j < out.words_.size(); ++j) {
        if (!(j & stride)) out.words_[j | stride] |= out.words_[j];
      }
    }
  }
  return out;
}

std::strong_ordering MintermSet::numeric_compare(const MintermSet& other) const {
  if (auto c = words_.size() <=> other.words_.size(); c != 0) return c;
  for (std::size_t i = words_.size(); i-- > 0;) {
    if (auto c = words_[i] <=> other.words_[i]; c != 0) return c;
  }
  return std::strong_ordering::equal;
}

std::size_t MintermSet::hash() const noexcept {
  std::size_t h = size_;
  for (auto w : words_) h ^= std::hash<std::uint64_t>{}(w) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

std::string_view to_string(ClosureMode mode) {
  switch (mode) {
    case ClosureMode::PowerSet: return "power";
    case ClosureMode::HyperPowerSet: return "hyperpower";
    case ClosureMode::SuperPowerSet: return "superpower";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Expression parsing

namespace {

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

// Evaluates over raw minterm sets of `frame` (erased minterms are masked at
// the end by the caller). `enforce_mode` is off for constraint expressions.
class ExprParser {
 public:
  ExprParser(std::string_view text, const Frame& frame, bool enforce_mode)
      : text_(text), frame_(frame), enforce_(enforce_mode) {}

  MintermSet parse() {
    auto result = parse_union();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return result;
  }

 private:
  MintermSet parse_union() {
    auto lhs = parse_difference();
    while (consume('|')) lhs |= parse_difference();
    return lhs;
  }

  MintermSet parse_difference() {
    auto lhs = parse_intersection();
    while (true) {
      skip_space();
      const auto at = pos_;
      if (!consume('\\')) break;
      if (enforce_ && frame_.mode() != ClosureMode::SuperPowerSet) {
        fail_at(at, "operator '\\' not permitted in " + std::string(to_string(frame_.mode())) +
                        " mode");
      }
      lhs.subtract(parse_intersection());
    }
    return lhs;
  }

  MintermSet parse_intersection() {
    auto lhs = parse_unary();
    while (true) {
      skip_space();
      const auto at = pos_;
      if (!consume('&')) break;
      auto rhs = parse_unary();
      if (enforce_ && frame_.mode() == ClosureMode::PowerSet &&
          !(masked(lhs) == masked(rhs))) {
        fail_at(at, "operator '&' between distinct elements not permitted in power mode");
      }
      lhs &= rhs;
    }
    return lhs;
  }

  MintermSet parse_unary() {
    skip_space();
    const auto at = pos_;
    if (consume('!')) {
      if (enforce_ && frame_.mode() != ClosureMode::SuperPowerSet) {
        fail_at(at, "operator '!' not permitted in " + std::string(to_string(frame_.mode())) +
                        " mode");
      }
      auto operand = parse_unary();
      auto out = frame_.universe();
      out.subtract(operand);
      return out;
    }
    return parse_primary();
  }

  MintermSet parse_primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    if (consume('(')) {
      auto inner = parse_union();
      if (!consume(')')) fail("expected ')'");
      return inner;
    }
    if (!is_ident_start(text_[pos_])) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    const auto start = pos_;
    while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
    const auto name = text_.substr(start, pos_ - start);
    if (name == "I") return frame_.universe();
    if (name == "EMPTY") return MintermSet(frame_.minterm_count());
    const auto index = frame_.atom_index(name);
    if (index == Frame::npos) fail_at(start, "unknown atom '" + std::string(name) + "'");
    return frame_.atom_minterms(index);
  }

  MintermSet masked(MintermSet m) const { return m.subtract(frame_.empty_mask()); }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool consume(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& msg) const { fail_at(pos_, msg); }
  [[noreturn]] void fail_at(std::size_t at, const std::string& msg) const {
    throw ParseError(at, msg);
  }

  std::string_view text_;
  const Frame& frame_;
  bool enforce_;
  std::size_t pos_ = 0;
};

}  // namespace

// ---------------------------------------------------------------------------
// Frame

FramePtr Frame::build(std::vector<std::string> atoms, std::vector<Constraint> constraints,
                      ClosureMode mode) {
  if (atoms.empty()) throw Error("frame needs at least one atom");
  if (atoms.size() > kMaxAtoms) {
    throw Error("frame has " + std::to_string(atoms.size()) + " atoms; at most " +
                std::to_string(kMaxAtoms) + " are supported");
  }
  std::set<std::string> seen;
  for (const auto& a : atoms) {
    if (a.empty() || !is_ident_start(a.front()) ||
        !std::all_of(a.begin(), a.end(), is_ident_char)) {
      throw Error("invalid atom name '" + a + "'");
    }
    if (a == "I" || a == "EMPTY") throw Error("atom name '" + a + "' is reserved");
    if (!seen.insert(a).second) throw Error("duplicate atom '" + a + "'");
  }

  auto free = std::shared_ptr<Frame>(new Frame());
  free->atoms_ = atoms;
  free->mode_ = mode;
  free->empty_mask_ = MintermSet(free->minterm_count());
  free->empty_mask_.set(0);
  if (constraints.empty()) return free;

  auto model = std::shared_ptr<Frame>(new Frame());
  model->atoms_ = std::move(atoms);
  model->mode_ = mode;
  model->free_ = free;
  model->empty_mask_ = free->empty_mask_;

  auto eval = [&](const std::string& text) {
    try {
      return ExprParser(text, *free, false).parse();
    } catch (const ParseError& e) {
      throw Error("constraint '" + text + "': " + e.what());
    }
  };
  for (const auto& c : constraints) {
    switch (c.kind) {
      case Constraint::Kind::Empty:
        model->empty_mask_ |= eval(c.lhs);
        break;
      case Constraint::Kind::Subset:
        model->empty_mask_ |= eval(c.lhs).subtract(eval(c.rhs));
        break;
      case Constraint::Kind::Equal: {
        const auto a = eval(c.lhs);
        const auto b = eval(c.rhs);
        model->empty_mask_ |= MintermSet(a).subtract(b);
        model->empty_mask_ |= MintermSet(b).subtract(a);
        break;
      }
    }
  }
  model->constraints_ = std::move(constraints);
  return model;
}

std::size_t Frame::atom_index(std::string_view name) const {
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (atoms_[i] == name) return i;
  }
  return npos;
}

FramePtr Frame::free_model() const { return free_ ? free_ : shared_from_this(); }

bool Frame::same_family(const Frame& other) const noexcept {
  return atoms_ == other.atoms_ && mode_ == other.mode_;
}

bool Frame::operator==(const Frame& other) const noexcept {
  return this == &other || (same_family(other) && empty_mask_ == other.empty_mask_);
}

SetElement Frame::canonicalize(MintermSet minterms) const {
  if (minterms.size() != minterm_count()) throw Error("minterm vector width does not match frame");
  minterms.subtract(empty_mask_);
  std::uint8_t rank = 3;
  if (!minterms.none()) {
    MintermSet atoms_inside(minterm_count());
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
      auto a = atom_minterms(i);
      if (MintermSet(a).subtract(empty_mask_).is_subset_of(minterms)) atoms_inside |= a;
    }
    if (atoms_inside.subtract(empty_mask_) == minterms) {
      rank = 0;
    } else {
      rank = minterms.up_closure().subtract(empty_mask_) == minterms ? 1 : 2;
    }
  }
  return SetElement(shared_from_this(), std::move(minterms), rank);
}

SetElement Frame::project(const SetElement& element) const {
  if (!same_family(element.frame())) throw Error("element belongs to an unrelated frame");
  return canonicalize(element.minterms());
}

MintermSet Frame::atom_minterms(std::size_t index) const {
  MintermSet m(minterm_count());
  const std::size_t bit = std::size_t{1} << index;
  for (std::size_t k = 0; k < minterm_count(); ++k) {
    if (k & bit) m.set(k);
  }
  return m;
}

MintermSet Frame::universe() const {
  MintermSet m(minterm_count());
  m = m.flipped();
  m.reset(0);
  return m;
}

SetElement Frame::atom(std::size_t index) const {
  if (index >= atoms_.size()) throw Error("atom index out of range");
  return canonicalize(atom_minterms(index));
}

SetElement Frame::atom(std::string_view name) const {
  const auto i = atom_index(name);
  if (i == npos) throw Error("unknown atom '" + std::string(name) + "'");
  return atom(i);
}

SetElement Frame::empty() const { return canonicalize(MintermSet(minterm_count())); }

SetElement Frame::total_ignorance() const { return canonicalize(universe()); }

// ---------------------------------------------------------------------------
// SetElement and set operations

bool SetElement::is_total_ignorance() const { return *this == frame_->total_ignorance(); }

bool SetElement::is_subset_of(const SetElement& other) const {
  return minterms_.is_subset_of(other.minterms_);
}

ClosureMode SetElement::level() const noexcept {
  switch (rank_) {
    case 1: return ClosureMode::HyperPowerSet;
    case 2: return ClosureMode::SuperPowerSet;
    default: return ClosureMode::PowerSet;
  }
}

std::strong_ordering operator<=>(const SetElement& a, const SetElement& b) {
  if (auto c = a.rank_ <=> b.rank_; c != 0) return c;
  if (auto c = a.minterms_.count() <=> b.minterms_.count(); c != 0) return c;
  return a.minterms_.numeric_compare(b.minterms_);
}

namespace {
void require_same_frame(const SetElement& a, const SetElement& b) {
  if (!(a.frame() == b.frame())) throw Error("set elements belong to different frames");
}
}  // namespace

SetElement combine_sets(SetOp op, const SetElement& a, const SetElement& b) {
  require_same_frame(a, b);
  auto m = a.minterms();
  switch (op) {
    case SetOp::Union: m |= b.minterms(); break;
    case SetOp::Intersect: m &= b.minterms(); break;
    case SetOp::Difference: m.subtract(b.minterms()); break;
  }
  return a.frame().canonicalize(std::move(m));
}

SetElement set_union(const SetElement& a, const SetElement& b) {
  return combine_sets(SetOp::Union, a, b);
}
SetElement set_intersect(const SetElement& a, const SetElement& b) {
  return combine_sets(SetOp::Intersect, a, b);
}
SetElement set_difference(const SetElement& a, const SetElement& b) {
  return combine_sets(SetOp::Difference, a, b);
}

SetElement complement(const SetElement& a) {
  if (a.frame().mode() != ClosureMode::SuperPowerSet) {
    throw Error("complement requires a super-power-set frame");
  }
  auto m = a.frame().universe();
  m.subtract(a.minterms());
  return a.frame().canonicalize(std::move(m));
}

std::string_view to_string(Relation relation) {
  switch (relation) {
    case Relation::Equal: return "equal";
    case Relation::ProperSubset: return "proper-subset";
    case Relation::ProperSuperset: return "proper-superset";
    case Relation::Disjoint: return "disjoint";
    case Relation::Overlapping: return "overlapping";
  }
  return "?";
}

Relation relate(const SetElement& a, const SetElement& b) {
  require_same_frame(a, b);
  const bool ab = a.is_subset_of(b);
  const bool ba = b.is_subset_of(a);
  if (ab && ba) return Relation::Equal;
  if (ab) return Relation::ProperSubset;
  if (ba) return Relation::ProperSuperset;
  if (!a.minterms().intersects(b.minterms())) return Relation::Disjoint;
  return Relation::Overlapping;
}

SetElement parse_expr(std::string_view text, const FramePtr& frame) {
  return frame->canonicalize(ExprParser(text, *frame, true).parse());
}

// ---------------------------------------------------------------------------
// Enumeration

std::vector<SetElement> enumerate_elements(const FramePtr& frame, std::size_t cap) {
  const auto& f = *frame;
  std::unordered_set<MintermSet> seen;
  std::vector<MintermSet> found;
  auto add = [&](MintermSet m) {
    m.subtract(f.empty_mask());
    if (m.none() || seen.contains(m)) return;
    if (found.size() >= cap) {
      throw Error("enumeration exceeds the cap of " + std::to_string(cap) + " elements");
    }
    seen.insert(m);
    found.push_back(std::move(m));
  };

  const std::size_t n = f.atom_count();
  switch (f.mode()) {
    case ClosureMode::PowerSet: {
      for (std::size_t subset = 1; subset < (std::size_t{1} << n); ++subset) {
        MintermSet m(f.minterm_count());
        for (std::size_t i = 0; i < n; ++i) {
          if (subset & (std::size_t{1} << i)) m |= f.atom_minterms(i);
        }
        add(std::move(m));
      }
      break;
    }
    case ClosureMode::HyperPowerSet: {
      for (std::size_t i = 0; i < n; ++i) add(f.atom_minterms(i));
      // Worklist closure under union and intersection.
      for (std::size_t i = 0; i < found.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
          add(found[i] | found[j]);
          add(found[i] & found[j]);
        }
      }
      break;
    }
    case ClosureMode::SuperPowerSet: {
      std::vector<std::size_t> live;
      for (std::size_t k = 1; k < f.minterm_count(); ++k) {
        if (!f.empty_mask().test(k)) live.push_back(k);
      }
      if (live.size() >= 63 || (std::size_t{1} << live.size()) - 1 > cap) {
        throw Error("enumeration of " + std::to_string(live.size()) +
                    " live minterms exceeds the cap of " + std::to_string(cap) + " elements");
      }
      for (std::size_t subset = 1; subset < (std::size_t{1} << live.size()); ++subset) {
        MintermSet m(f.minterm_count());
        for (std::size_t b = 0; b < live.size(); ++b) {
          if (subset & (std::size_t{1} << b)) m.set(live[b]);
        }
        add(std::move(m));
      }
      break;
    }
  }

  std::vector<SetElement> out;
  out.reserve(found.size());
  for (auto& m : found) out.push_back(f.canonicalize(std::move(m)));
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Support and labels

std::vector<std::size_t> atom_support(const SetElement& element) {
  const auto& f = element.frame();
  const auto& m = element.minterms();
  std::vector<std::size_t> support;
  for (std::size_t i = 0; i < f.atom_count(); ++i) {
    const std::size_t bit = std::size_t{1} << i;
    for (std::size_t k = 1; k < f.minterm_count(); ++k) {
      const std::size_t other = k ^ bit;
      if ((k & bit) == 0 || other == 0) continue;
      if (f.empty_mask().test(k) || f.empty_mask().test(other)) continue;
      if (m.test(k) != m.test(other)) {
        support.push_back(i);
        break;
      }
    }
  }
  return support;
}

namespace {

struct Candidate {
  std::string text;
  MintermSet raw;
  bool compound;
};

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::string wrap(const Candidate& c) { return c.compound ? "(" + c.text + ")" : c.text; }

}  // namespace

std::string to_string(const SetElement& element) {
  const auto& f = element.frame();
  if (element.is_empty()) return "EMPTY";
  if (element.is_total_ignorance()) return "I";

  auto matches = [&](const MintermSet& raw) {
    auto m = raw;
    m.subtract(f.empty_mask());
    return m == element.minterms();
  };

  const std::size_t n = f.atom_count();
  std::vector<Candidate> level1;
  for (std::size_t i = 0; i < n; ++i) level1.push_back({f.atoms()[i], f.atom_minterms(i), false});

  if (n <= 10) {
    std::vector<std::size_t> subsets;
    for (std::size_t s = 1; s < (std::size_t{1} << n); ++s) {
      if (std::popcount(s) >= 2) subsets.push_back(s);
    }
    std::stable_sort(subsets.begin(), subsets.end(),
                     [](std::size_t a, std::size_t b) { return std::popcount(a) < std::popcount(b); });
    for (bool is_union : {true, false}) {
      for (auto s : subsets) {
        std::vector<std::string> names;
        MintermSet raw = is_union ? MintermSet(f.minterm_count()) : f.universe();
        for (std::size_t i = 0; i < n; ++i) {
          if (!(s & (std::size_t{1} << i))) continue;
          names.push_back(f.atoms()[i]);
          if (is_union) raw |= f.atom_minterms(i);
          else raw &= f.atom_minterms(i);
        }
        level1.push_back({join(names, is_union ? "|" : "&"), std::move(raw), true});
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    auto raw = f.universe();
    raw.subtract(f.atom_minterms(i));
    level1.push_back({"!" + f.atoms()[i], std::move(raw), false});
  }

  for (const auto& c : level1) {
    if (matches(c.raw)) return c.text;
  }

  if (n <= 5) {
    for (const auto& a : level1) {
      for (const auto& b : level1) {
        if (&a == &b) continue;
        if (matches(a.raw & b.raw)) return wrap(a) + "&" + wrap(b);
        if (matches(a.raw | b.raw)) return wrap(a) + "|" + wrap(b);
      }
    }
  }

  // Disjunction of minterms.
  std::vector<std::string> terms;
  for (std::size_t k = 1; k < f.minterm_count(); ++k) {
    if (!element.minterms().test(k)) continue;
    std::vector<std::string> lits;
    for (std::size_t i = 0; i < n; ++i) {
      lits.push_back(((k >> i) & 1U) ? f.atoms()[i] : "!" + f.atoms()[i]);
    }
    terms.push_back(terms.empty() && element.minterms().count() == 1 ? join(lits, "&")
                                                                      : "(" + join(lits, "&") + ")");
  }
  return join(terms, "|");
}

}  // namespace fusion
