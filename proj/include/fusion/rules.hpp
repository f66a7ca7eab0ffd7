// Combination rules: conjunctive (with per-product provenance), disjunctive,
// exclusive disjunctive, mixed, conflict transfers, DSm classic and hybrid,
// pairwise PCR5 and Murphy's average.
//
// Sources may live on a constrained model frame or on its free twin. The
// conjunctive result always keys its cells by the free-model intersection so
// that each partial conflict keeps its identity; a model is applied only when
// mass is transferred.

#pragma once

#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fusion/algebra.hpp"
#include "fusion/mass.hpp"

namespace fusion {

/// One product of the conjunctive rule: the focal element chosen from each
/// source, in source order, with its mass.
struct ProductTerm {
  std::vector<SetElement> focals;  // free-model elements
  std::vector<double> masses;
  double product = 0.0;

  friend bool operator==(const ProductTerm&, const ProductTerm&) = default;
};

struct Cell {
  double mass = 0.0;
  std::vector<ProductTerm> terms;  // sorted by focal keys

  friend bool operator==(const Cell&, const Cell&) = default;
};

class ConjunctiveResult {
 public:
  ConjunctiveResult() = default;
  ConjunctiveResult(FramePtr model, std::size_t source_count, std::map<SetElement, Cell> cells);

  const FramePtr& model() const noexcept { return model_; }
  FramePtr free_frame() const { return model_->free_model(); }
  std::size_t source_count() const noexcept { return source_count_; }
  /// Keyed by free-model intersection, canonical order.
  const std::map<SetElement, Cell>& cells() const noexcept { return cells_; }
  double total() const;
  bool is_model_empty(const SetElement& cell) const;
  /// Cell masses as a bba on the free frame.
  Bba flatten() const;

  friend bool operator==(const ConjunctiveResult& a, const ConjunctiveResult& b) {
    return a.source_count_ == b.source_count_ && a.cells_ == b.cells_;
  }

 private:
  FramePtr model_;
  std::size_t source_count_ = 0;
  std::map<SetElement, Cell> cells_;
};

/// Conjunctive combination of two or more sources. `model` defaults to the
/// frame of the first source; all sources must share its family.
ConjunctiveResult conjunctive(std::span<const Bba> bbas, FramePtr model = nullptr);

/// Combines an existing conjunctive result with one more source, extending
/// every product term.
ConjunctiveResult extend(const ConjunctiveResult& acc, const Bba& next);

/// Conjunctive result of a single source (one-element product terms).
ConjunctiveResult singleton_result(const Bba& bba, FramePtr model = nullptr);

Bba disjunctive(std::span<const Bba> bbas);

/// Mass of each focal tuple goes to the "exactly one source is right"
/// element. Needs a super-power-set frame.
Bba exclusive_disjunctive(std::span<const Bba> bbas);

/// Binary tree over 1-based source indices with & and | nodes, for example
/// `((1&2)|3)|4`.
class SourceTree {
 public:
  static SourceTree parse(std::string_view text);

  /// Throws Error unless every index 1..n appears exactly once.
  void validate(std::size_t source_count) const;
  MintermSet evaluate(std::span<const SetElement> focals) const;
  const std::string& text() const noexcept { return text_; }

 private:
  struct Node {
    char op = 0;  // '&', '|', or 0 for a leaf
    std::size_t leaf = 0;
    int left = -1;
    int right = -1;
  };
  MintermSet eval_node(int node, std::span<const SetElement> focals) const;

  std::vector<Node> nodes_;
  int root_ = -1;
  std::string text_;
};

Bba mixed(std::span<const Bba> bbas, const SourceTree& tree);

enum class ConflictStrategy { DempsterNormalize, YagerToIgnorance, TbmToEmpty, DuboisPradeToUnion };

std::string_view to_string(ConflictStrategy strategy);

/// Non-empty cells keep their mass on the model-canonical element; model-empty
/// cells are handled per strategy. Throws Error for Dempster under total
/// conflict.
Bba transfer_conflict(const ConjunctiveResult& conj, ConflictStrategy strategy);

/// Conjunctive cells on the free model, no transfer.
Bba dsm_classic(std::span<const Bba> bbas);

/// Simplified hybrid rule: every model-empty cell moves, product term by
/// product term, to the union target of its focal elements; to I when that
/// is empty too.
Bba dsm_hybrid(const ConjunctiveResult& conj);

using CellPredicate = std::function<bool(const SetElement& cell)>;

/// Pairwise PCR5. Cells for which `treat_as_empty` holds are split back to the
/// two focal elements of each product term in proportion to their masses;
/// other cells keep their mass. The default predicate selects model-empty
/// cells.
Bba pcr5_pair(const Bba& b1, const Bba& b2, FramePtr model = nullptr,
              CellPredicate treat_as_empty = {});

Bba murphy_average(std::span<const Bba> bbas);

// Transfer building blocks shared with the UFT meta-rule.

/// Where a pessimistic ("at least one is right") transfer sends a product
/// term landing on `cell`: the union of the term's minimal focal elements.
/// When a single focal element is contained in all others the conflict lies
/// inside that element, and the target is the union of the atoms it is built
/// from. Result is a free-model element.
SetElement union_target(const ProductTerm& term, const SetElement& cell);

struct Share {
  SetElement element;  // free-model focal element
  double mass;
};

/// PCR5 split of a two-source product term. Throws Error for longer terms.
std::vector<Share> pcr5_shares(const ProductTerm& term);

}  // namespace fusion
