// Unified fusion meta-rule: every partial conflict of the conjunctive rule is
// routed according to what is known about the hypotheses that produced it,
// plus the lower / middle / upper bound assignments.

#pragma once

#include <map>
#include <optional>
#include <span>
#include <string_view>

#include "fusion/algebra.hpp"
#include "fusion/mass.hpp"
#include "fusion/rules.hpp"

namespace fusion {

enum class World { Closed, Open };

std::string_view to_string(World world);

struct RelationshipCase {
  enum class Kind {
    KeepOnIntersection,     // consensus: mass stays on the intersection
    OptimisticBoth,         // PCR5 split between the two hypotheses
    OneRightUnknown,        // -> union
    OneRightKnown,          // -> winner
    Pessimistic,            // -> union
    VeryPessimisticClosed,  // -> I
    VeryPessimisticOpen,    // -> EMPTY
    BothWrong,              // -> other atoms (closed world) or EMPTY (open world)
    NeitherInterests,       // PCR5 split of a non-empty intersection
  };

  Kind kind = Kind::KeepOnIntersection;
  std::optional<SetElement> winner;  // free-model element, OneRightKnown only

  static RelationshipCase of(Kind kind) { return {kind, std::nullopt}; }
  static RelationshipCase right(SetElement winner) { return {Kind::OneRightKnown, std::move(winner)}; }

  friend bool operator==(const RelationshipCase&, const RelationshipCase&) = default;
};

std::string_view to_string(RelationshipCase::Kind kind);

/// Caller knowledge about individual intersections, keyed by free-model cell.
class RelationshipSpec {
 public:
  RelationshipSpec() = default;
  explicit RelationshipSpec(World world) : world_(world) {}

  World world() const noexcept { return world_; }
  void set_world(World world) noexcept { world_ = world; }
  /// `cell` is projected onto its free model; a later entry replaces an earlier one.
  void set(const SetElement& cell, RelationshipCase relationship);
  const std::map<SetElement, RelationshipCase>& entries() const noexcept { return entries_; }

 private:
  World world_ = World::Closed;
  std::map<SetElement, RelationshipCase> entries_;
};

/// Explicit entry, else Pessimistic for model-empty cells, else
/// KeepOnIntersection. Throws Error when the entry cannot be honoured: keeping
/// mass on a model-empty cell in a closed world.
RelationshipCase resolve_case(const RelationshipSpec& spec, const SetElement& cell,
                              const Frame& model);

/// Applies the meta-rule to an existing conjunctive result.
Bba uft_apply(const ConjunctiveResult& conj, const RelationshipSpec& spec);

/// Conjunctive combination followed by per-cell dispatch. Sources may be on
/// `model` or its free twin. Output is on `model` and keeps any EMPTY mass.
Bba uft_combine(std::span<const Bba> bbas, const FramePtr& model, const RelationshipSpec& spec);

enum class BoundKind { Lower, Middle, Upper };

std::string_view to_string(BoundKind kind);

/// Bound assignments of a pair of sources, computed on the free model. Every
/// intersection cell (a cell that is not itself a focal element of either
/// source) is treated as conflict: lower sends it to I (closed) or EMPTY
/// (open), middle to the union target, upper splits it by PCR5.
Bba bound(const Bba& b1, const Bba& b2, BoundKind kind, World world = World::Closed);

/// Mass the upper bound moves onto each element by splitting intersection
/// cells (the bound minus the cells it keeps).
Bba upper_bound_gains(const Bba& b1, const Bba& b2);

/// Element-wise mean.
Bba average_bounds(const Bba& lower, const Bba& upper);

}  // namespace fusion
