// Sequential fusion. The state keeps the running conjunctive result in
// free-model form and applies a transfer only when a result is requested,
// so a rule that is not associative still gives an order-independent answer.

#pragma once

#include <optional>
#include <string_view>

#include "fusion/mass.hpp"
#include "fusion/rules.hpp"
#include "fusion/uft.hpp"

namespace fusion {

struct Renderer {
  enum class Kind { DsmClassic, Yager, Tbm, DuboisPrade, Dempster, DsmHybrid, Uft };
  Kind kind = Kind::DsmClassic;
  std::optional<RelationshipSpec> spec;  // required for Uft
};

std::string_view to_string(Renderer::Kind kind);

class FusionState {
 public:
  /// Throws Error unless 0 <= decay_factor <= 1.
  static FusionState init(FramePtr model, double decay_factor = 1.0);

  /// Returns the state after combining `bba`. With decay_factor < 1 the
  /// stored evidence is first discounted toward I by that factor.
  FusionState update(const Bba& bba) const;

  /// The chosen transfer applied to the current accumulator. With no sources
  /// yet the result is vacuous.
  Bba report(const Renderer& renderer) const;

  const FramePtr& model() const noexcept { return model_; }
  double decay_factor() const noexcept { return decay_; }
  std::size_t source_count() const noexcept { return sources_; }
  /// Empty until the first update.
  const std::optional<ConjunctiveResult>& accumulator() const noexcept { return acc_; }

  friend bool operator==(const FusionState&, const FusionState&) = default;

 private:
  FramePtr model_;
  double decay_ = 1.0;
  std::size_t sources_ = 0;
  std::optional<ConjunctiveResult> acc_;
};

}  // namespace fusion
