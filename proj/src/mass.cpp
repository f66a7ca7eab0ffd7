#include "fusion/mass.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace fusion {

Bba::Bba(FramePtr frame, std::string label) : frame_(std::move(frame)), label_(std::move(label)) {
  if (!frame_) throw Error("bba needs a frame");
}

void Bba::add(const SetElement& element, double mass) {
  if (!std::isfinite(mass) || mass < 0.0) {
    throw Error("mass must be a finite non-negative number");
  }
  if (!(element.frame() == *frame_)) throw Error("focal element belongs to a different frame");
  if (mass == 0.0) return;
  focal_[element] += mass;
}

double Bba::mass(const SetElement& element) const {
  const auto it = focal_.find(element);
  return it == focal_.end() ? 0.0 : it->second;
}

double Bba::total() const {
  double sum = 0.0;
  for (const auto& [_, m] : focal_) sum += m;
  return sum;
}

Bba project(const Bba& bba, const FramePtr& target) {
  Bba out(target, bba.label());
  for (const auto& [x, m] : bba.focal()) out.add(target->project(x), m);
  return out;
}

double max_abs_difference(const Bba& a, const Bba& b) {
  double worst = 0.0;
  for (const auto& [x, m] : a.focal()) worst = std::max(worst, std::abs(m - b.mass(x)));
  for (const auto& [x, m] : b.focal()) worst = std::max(worst, std::abs(m - a.mass(x)));
  return worst;
}

std::string_view to_string(MassKind kind) {
  switch (kind) {
    case MassKind::Normalized: return "normalized";
    case MassKind::Incomplete: return "incomplete";
    case MassKind::Paraconsistent: return "paraconsistent";
  }
  return "?";
}

MassKind classify(const Bba& bba, double tolerance) {
  const double sum = bba.total();
  if (sum < 1.0 - tolerance) return MassKind::Incomplete;
  if (sum > 1.0 + tolerance) return MassKind::Paraconsistent;
  return MassKind::Normalized;
}

Bba normalize(const Bba& bba) {
  const double sum = bba.total();
  if (sum <= 0.0) throw Error("cannot normalize a bba whose masses sum to zero");
  Bba out(bba.frame_ptr(), bba.label());
  for (const auto& [x, m] : bba.focal()) out.add(x, m / sum);
  return out;
}

Bba discount(const Bba& bba, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw Error("discount factor must lie in [0, 1]");
  if (classify(bba) != MassKind::Normalized) throw Error("discounting needs a normalized bba");
  if (alpha == 1.0) return bba;
  Bba out(bba.frame_ptr(), bba.label());
  const auto ignorance = bba.frame().total_ignorance();
  for (const auto& [x, m] : bba.focal()) out.add(x, alpha * m);
  out.add(ignorance, 1.0 - alpha);
  return out;
}

Bba vacuous(const FramePtr& frame) {
  Bba out(frame, "vacuous");
  out.add(frame->total_ignorance(), 1.0);
  return out;
}

// ---------------------------------------------------------------------------
// Interval-valued masses

IntervalSet::IntervalSet(std::vector<Interval> pieces) {
  if (pieces.empty()) throw Error("interval set must not be empty");
  for (const auto& p : pieces) {
    if (!(p.lo >= 0.0 && p.lo <= p.hi && p.hi <= 1.0)) {
      throw Error("interval endpoints must satisfy 0 <= lo <= hi <= 1");
    }
  }
  std::sort(pieces.begin(), pieces.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  for (const auto& p : pieces) {
    if (!pieces_.empty() && p.lo <= pieces_.back().hi) {
      pieces_.back().hi = std::max(pieces_.back().hi, p.hi);
    } else {
      pieces_.push_back(p);
    }
  }
}

IntervalSet IntervalSet::scaled(double factor) const {
  IntervalSet out;
  for (const auto& p : pieces_) out.pieces_.push_back({p.lo * factor, p.hi * factor});
  return out;
}

ImpreciseBba::ImpreciseBba(FramePtr frame, std::string label)
    : frame_(std::move(frame)), label_(std::move(label)) {
  if (!frame_) throw Error("bba needs a frame");
}

void ImpreciseBba::set(const SetElement& element, IntervalSet value) {
  if (!(element.frame() == *frame_)) throw Error("focal element belongs to a different frame");
  focal_[element] = std::move(value);
}

double ImpreciseBba::sum_inf() const {
  double s = 0.0;
  for (const auto& [_, v] : focal_) s += v.inf();
  return s;
}

double ImpreciseBba::sum_sup() const {
  double s = 0.0;
  for (const auto& [_, v] : focal_) s += v.sup();
  return s;
}

namespace {

// Minkowski sum of two interval unions, merged.
std::vector<Interval> minkowski(const std::vector<Interval>& a, const std::vector<Interval>& b,
                                double tolerance) {
  std::vector<Interval> sums;
  for (const auto& x : a) {
    for (const auto& y : b) sums.push_back({x.lo + y.lo, x.hi + y.hi});
  }
  std::sort(sums.begin(), sums.end(), [](const Interval& p, const Interval& q) { return p.lo < q.lo; });
  std::vector<Interval> merged;
  for (const auto& s : sums) {
    if (!merged.empty() && s.lo <= merged.back().hi + tolerance) {
      merged.back().hi = std::max(merged.back().hi, s.hi);
    } else {
      merged.push_back(s);
    }
  }
  return merged;
}

}  // namespace

MassKind classify_imprecise(const ImpreciseBba& bba, double tolerance) {
  if (bba.sum_sup() < 1.0 - tolerance) return MassKind::Incomplete;
  if (bba.sum_inf() > 1.0 + tolerance) return MassKind::Paraconsistent;
  // Sweep the achievable totals; gaps between subintervals can exclude 1 even
  // when sum(inf) <= 1 <= sum(sup).
  std::vector<Interval> reachable{{0.0, 0.0}};
  for (const auto& [_, v] : bba.focal()) reachable = minkowski(reachable, v.pieces(), tolerance);
  for (const auto& r : reachable) {
    if (r.lo - tolerance <= 1.0 && 1.0 <= r.hi + tolerance) return MassKind::Normalized;
  }
  return MassKind::Paraconsistent;
}

ImpreciseBba normalize_imprecise(const ImpreciseBba& bba) {
  const double sup = bba.sum_sup();
  if (sup <= 0.0) throw Error("cannot normalize an interval bba whose suprema sum to zero");
  ImpreciseBba out(bba.frame_ptr(), bba.label());
  for (const auto& [x, v] : bba.focal()) out.set(x, v.scaled(1.0 / sup));
  return out;
}

}  // namespace fusion
