#include "fusion/dynamic.hpp"

namespace fusion {

std::string_view to_string(Renderer::Kind kind) {
  using K = Renderer::Kind;
  switch (kind) {
    case K::DsmClassic: return "dsm-classic";
    case K::Yager: return "yager";
    case K::Tbm: return "tbm";
    case K::DuboisPrade: return "dubois-prade";
    case K::Dempster: return "dempster";
    case K::DsmHybrid: return "dsm-hybrid";
    case K::Uft: return "uft";
  }
  return "?";
}

FusionState FusionState::init(FramePtr model, double decay_factor) {
  if (!model) throw Error("fusion state needs a frame");
  if (!(decay_factor >= 0.0 && decay_factor <= 1.0)) throw Error("decay factor must lie in [0, 1]");
  FusionState state;
  state.model_ = std::move(model);
  state.decay_ = decay_factor;
  return state;
}

FusionState FusionState::update(const Bba& bba) const {
  FusionState next = *this;
  if (!acc_) {
    next.acc_ = singleton_result(bba, model_);
  } else if (decay_ < 1.0) {
    // Worn-out evidence: flatten, discount toward I, then combine.
    const auto flat = acc_->flatten();
    Bba aged(flat.frame_ptr());
    for (const auto& [x, m] : flat.focal()) aged.add(x, decay_ * m);
    aged.add(flat.frame().total_ignorance(), (1.0 - decay_) * flat.total());
    next.acc_ = extend(singleton_result(aged, model_), bba);
  } else {
    next.acc_ = extend(*acc_, bba);
  }
  ++next.sources_;
  return next;
}

Bba FusionState::report(const Renderer& renderer) const {
  using K = Renderer::Kind;
  if (renderer.kind == K::Uft && !renderer.spec) throw Error("uft renderer needs a relationship spec");
  if (!acc_) {
    return renderer.kind == K::DsmClassic ? vacuous(model_->free_model()) : vacuous(model_);
  }
  switch (renderer.kind) {
    case K::DsmClassic: return acc_->flatten();
    case K::Yager: return transfer_conflict(*acc_, ConflictStrategy::YagerToIgnorance);
    case K::Tbm: return transfer_conflict(*acc_, ConflictStrategy::TbmToEmpty);
    case K::DuboisPrade: return transfer_conflict(*acc_, ConflictStrategy::DuboisPradeToUnion);
    case K::Dempster: return transfer_conflict(*acc_, ConflictStrategy::DempsterNormalize);
    case K::DsmHybrid: return dsm_hybrid(*acc_);
    case K::Uft: return uft_apply(*acc_, *renderer.spec);
  }
  return acc_->flatten();
}

}  // namespace fusion
