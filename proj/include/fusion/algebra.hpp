// Fusion space: the Boolean algebra (Theta, |, &, !) over a finite frame of
// discernment, with model constraints erasing Venn regions.
//
// Every element of the super-power set is stored as the set of Venn minterms
// it covers. Minterm k is the region whose atom memberships are the binary
// digits of k (bit i <-> atom i). Minterm 0 lies outside every atom and is
// never part of any element. A constrained model erases further minterms, and
// an element is canonical when it covers no erased minterm, so two canonical
// elements are equal exactly when their minterm sets are equal.

#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fusion {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by the expression parser; `position` is a 0-based column.
class ParseError : public Error {
 public:
  ParseError(std::size_t position, const std::string& what)
      : Error(what), position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

inline constexpr std::size_t kMaxAtoms = 16;

/// Fixed-width bit vector indexed by minterm.
class MintermSet {
 public:
  MintermSet() = default;
  explicit MintermSet(std::size_t size);

  std::size_t size() const noexcept { return size_; }
  bool test(std::size_t k) const;
  void set(std::size_t k);
  void reset(std::size_t k);
  bool none() const noexcept;
  std::size_t count() const noexcept;
  bool is_subset_of(const MintermSet& other) const;
  bool intersects(const MintermSet& other) const;

  MintermSet& operator&=(const MintermSet& other);
  MintermSet& operator|=(const MintermSet& other);
  MintermSet& subtract(const MintermSet& other);
  /// Flips every bit in [0, size).
  MintermSet flipped() const;
  /// Adds every minterm whose atom memberships include those of a member
  /// (size must be a power of two).
  MintermSet up_closure() const;

  friend MintermSet operator&(MintermSet a, const MintermSet& b) { return a &= b; }
  friend MintermSet operator|(MintermSet a, const MintermSet& b) { return a |= b; }
  friend bool operator==(const MintermSet&, const MintermSet&) = default;

  /// Compares as unsigned integers (bit k has weight 2^k).
  std::strong_ordering numeric_compare(const MintermSet& other) const;
  std::size_t hash() const noexcept;

 private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

enum class ClosureMode { PowerSet, HyperPowerSet, SuperPowerSet };

std::string_view to_string(ClosureMode mode);

struct Constraint {
  enum class Kind { Empty, Subset, Equal };
  Kind kind = Kind::Empty;
  std::string lhs;
  std::string rhs;  // unused for Kind::Empty

  static Constraint empty(std::string expr) { return {Kind::Empty, std::move(expr), {}}; }
  static Constraint subset(std::string a, std::string b) {
    return {Kind::Subset, std::move(a), std::move(b)};
  }
  static Constraint equal(std::string a, std::string b) {
    return {Kind::Equal, std::move(a), std::move(b)};
  }
};

class Frame;
class SetElement;
using FramePtr = std::shared_ptr<const Frame>;

class Frame : public std::enable_shared_from_this<Frame> {
 public:
  /// Builds a frame and its erased-minterm mask. Throws Error on duplicate or
  /// reserved atom names, more than kMaxAtoms atoms, or constraints that
  /// mention unknown atoms or fail to parse.
  static FramePtr build(std::vector<std::string> atoms,
                        std::vector<Constraint> constraints = {},
                        ClosureMode mode = ClosureMode::SuperPowerSet);

  const std::vector<std::string>& atoms() const noexcept { return atoms_; }
  std::size_t atom_count() const noexcept { return atoms_.size(); }
  std::size_t minterm_count() const noexcept { return std::size_t{1} << atoms_.size(); }
  const std::vector<Constraint>& constraints() const noexcept { return constraints_; }
  ClosureMode mode() const noexcept { return mode_; }
  const MintermSet& empty_mask() const noexcept { return empty_mask_; }

  /// Index of the named atom, or npos.
  std::size_t atom_index(std::string_view name) const;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  /// The unconstrained twin (same atoms and mode). A free frame returns itself.
  FramePtr free_model() const;
  bool is_free() const noexcept { return free_ == nullptr; }
  /// Same atoms and closure mode; elements of one family member can be
  /// projected onto another.
  bool same_family(const Frame& other) const noexcept;
  bool operator==(const Frame& other) const noexcept;

  SetElement canonicalize(MintermSet minterms) const;
  /// Re-expresses an element of a frame in the same family under this model.
  SetElement project(const SetElement& element) const;
  SetElement atom(std::size_t index) const;
  SetElement atom(std::string_view name) const;
  SetElement empty() const;
  SetElement total_ignorance() const;

  /// Raw (unmasked) minterm set of atom i over the full 2^n universe.
  MintermSet atom_minterms(std::size_t index) const;
  /// All minterms except the all-negative one.
  MintermSet universe() const;

 private:
  Frame() = default;

  std::vector<std::string> atoms_;
  std::vector<Constraint> constraints_;
  ClosureMode mode_ = ClosureMode::SuperPowerSet;
  MintermSet empty_mask_;
  FramePtr free_;
};

/// Canonical element of the super-power set of a frame.
class SetElement {
 public:
  SetElement() = default;

  const Frame& frame() const { return *frame_; }
  const FramePtr& frame_ptr() const noexcept { return frame_; }
  const MintermSet& minterms() const noexcept { return minterms_; }
  bool is_empty() const noexcept { return minterms_.none(); }
  bool is_total_ignorance() const;
  bool is_subset_of(const SetElement& other) const;

  /// Equality compares minterm sets; callers keep elements of one frame apart.
  friend bool operator==(const SetElement& a, const SetElement& b) {
    return a.minterms_ == b.minterms_;
  }
  /// Smallest closure level that contains the element: PowerSet for unions of
  /// atoms, HyperPowerSet for union/intersection expressions, SuperPowerSet
  /// when a complement is needed. The empty element reports PowerSet.
  ClosureMode level() const noexcept;

  /// Canonical order: unions of atoms, then other complement-free elements,
  /// then the rest, and EMPTY last; within a level by number of minterms,
  /// then minterm vector as an integer.
  friend std::strong_ordering operator<=>(const SetElement& a, const SetElement& b);

 private:
  friend class Frame;
  SetElement(FramePtr frame, MintermSet minterms, std::uint8_t rank)
      : frame_(std::move(frame)), minterms_(std::move(minterms)), rank_(rank) {}

  FramePtr frame_;
  MintermSet minterms_;
  std::uint8_t rank_ = 0;  // closure level 0..2, or 3 for EMPTY
};

enum class SetOp { Union, Intersect, Difference };

/// Throws Error when the operands belong to different frames.
SetElement combine_sets(SetOp op, const SetElement& a, const SetElement& b);
SetElement set_union(const SetElement& a, const SetElement& b);
SetElement set_intersect(const SetElement& a, const SetElement& b);
SetElement set_difference(const SetElement& a, const SetElement& b);

/// Complement relative to I. Throws Error unless the frame is in
/// super-power-set mode.
SetElement complement(const SetElement& a);

enum class Relation { Equal, ProperSubset, ProperSuperset, Disjoint, Overlapping };

std::string_view to_string(Relation relation);

/// Position of `a` relative to `b` in the inclusion order. Two empty
/// elements are Equal; an empty element is a ProperSubset of anything else.
Relation relate(const SetElement& a, const SetElement& b);

/// Parses an expression over the frame's atoms.
///
/// Grammar, tightest first: `!x` (complement), `x & y`, `x \ y`, `x | y`,
/// parentheses, and the literals `I` and `EMPTY`. Power-set frames reject
/// `!`, `\` and `&` between distinct operands; hyper-power-set frames reject
/// `!` and `\`.
SetElement parse_expr(std::string_view text, const FramePtr& frame);

inline constexpr std::size_t kDefaultEnumerationCap = std::size_t{1} << 20;

/// Distinct non-empty elements reachable under the frame's closure mode,
/// in canonical order. Throws Error if the count would exceed `cap`.
std::vector<SetElement> enumerate_elements(const FramePtr& frame,
                                           std::size_t cap = kDefaultEnumerationCap);

/// Indices of the atoms whose membership the element's free-model form
/// depends on. `A & C` depends on A and C; `!B` depends only on B.
std::vector<std::size_t> atom_support(const SetElement& element);

/// Short human-readable expression that parses back to `element`.
std::string to_string(const SetElement& element);

}  // namespace fusion

template <>
struct std::hash<fusion::MintermSet> {
  std::size_t operator()(const fusion::MintermSet& m) const noexcept { return m.hash(); }
};
