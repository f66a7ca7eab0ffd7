// Basic belief assignments: crisp masses, interval-valued masses, and the
// operations that do not combine sources (classification, normalization,
// discounting).

#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "fusion/algebra.hpp"

namespace fusion {

inline constexpr double kDefaultTolerance = 1e-9;

/// Crisp mass function over the elements of one frame. The sum is not forced
/// to 1; zero masses are not stored.
class Bba {
 public:
  Bba() = default;
  explicit Bba(FramePtr frame, std::string label = {});

  const FramePtr& frame_ptr() const noexcept { return frame_; }
  const Frame& frame() const { return *frame_; }
  const std::string& label() const noexcept { return label_; }
  void set_label(std::string label) { label_ = std::move(label); }

  /// Adds `mass` to `element` (accumulating). Throws Error on a negative or
  /// non-finite mass, or an element from a different frame.
  void add(const SetElement& element, double mass);
  double mass(const SetElement& element) const;
  const std::map<SetElement, double>& focal() const noexcept { return focal_; }
  bool empty() const noexcept { return focal_.empty(); }
  double total() const;

  friend bool operator==(const Bba& a, const Bba& b) { return a.focal_ == b.focal_; }

 private:
  FramePtr frame_;
  std::string label_;
  std::map<SetElement, double> focal_;
};

/// Same masses re-keyed onto another frame of the same family; elements that
/// collapse together under `target`'s model are summed.
Bba project(const Bba& bba, const FramePtr& target);

/// Largest absolute difference of masses over the union of supports.
double max_abs_difference(const Bba& a, const Bba& b);

enum class MassKind { Normalized, Incomplete, Paraconsistent };

std::string_view to_string(MassKind kind);

MassKind classify(const Bba& bba, double tolerance = kDefaultTolerance);

/// Divides every mass by the sum. Throws Error when the sum is zero.
Bba normalize(const Bba& bba);

/// Classical reliability discounting: m'(X) = alpha m(X) for X != I and the
/// residual 1 - alpha moves to I. Requires a normalized input and alpha in
/// [0, 1].
Bba discount(const Bba& bba, double alpha);

/// {I: 1}
Bba vacuous(const FramePtr& frame);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Sorted, pairwise-disjoint closed subintervals of [0, 1].
class IntervalSet {
 public:
  IntervalSet() = default;
  /// Validates 0 <= lo <= hi <= 1, then sorts and merges overlaps.
  explicit IntervalSet(std::vector<Interval> pieces);

  const std::vector<Interval>& pieces() const noexcept { return pieces_; }
  double inf() const { return pieces_.front().lo; }
  double sup() const { return pieces_.back().hi; }
  IntervalSet scaled(double factor) const;

  friend bool operator==(const IntervalSet&, const IntervalSet&) = default;

 private:
  std::vector<Interval> pieces_;
};

/// Mass function whose values are finite unions of subintervals of [0, 1].
class ImpreciseBba {
 public:
  ImpreciseBba() = default;
  explicit ImpreciseBba(FramePtr frame, std::string label = {});

  const Frame& frame() const { return *frame_; }
  const FramePtr& frame_ptr() const noexcept { return frame_; }
  const std::string& label() const noexcept { return label_; }
  /// Replaces the value at `element`.
  void set(const SetElement& element, IntervalSet value);
  const std::map<SetElement, IntervalSet>& focal() const noexcept { return focal_; }
  double sum_inf() const;
  double sum_sup() const;

  friend bool operator==(const ImpreciseBba& a, const ImpreciseBba& b) {
    return a.focal_ == b.focal_;
  }

 private:
  FramePtr frame_;
  std::string label_;
  std::map<SetElement, IntervalSet> focal_;
};

/// Incomplete when even the suprema sum below 1; normalized when some crisp
/// selection from the intervals sums to 1; paraconsistent otherwise.
MassKind classify_imprecise(const ImpreciseBba& bba, double tolerance = kDefaultTolerance);

/// Every endpoint divided by the sum of suprema. Throws Error when that sum is 0.
ImpreciseBba normalize_imprecise(const ImpreciseBba& bba);

}  // namespace fusion
