#pragma once

#include <cstddef>
#include <span>
#include <string_view>

#include "sortedl1l2/linalg.hpp"

namespace sortedl1l2 {

/// (t, r) of the exponential rank weights: the t largest magnitudes get
/// e^{−r(t−p+1)/t} for rank p = 1..t, everything else gets 1.
struct WeightParams {
  std::size_t t = 20;
  double r = 0.8;
  friend bool operator==(const WeightParams&, const WeightParams&) = default;
};

enum class ScheduleMode { two_stage, one_stage, constant_half };

std::string_view to_string(ScheduleMode mode);
ScheduleMode schedule_mode_from_string(std::string_view name);

struct WeightSchedule {
  WeightParams stage1{20, 0.8};
  WeightParams stage2{27, 3.0};
  /// Outer iterations k > switch_iter use stage2.
  std::size_t switch_iter = 20;
  ScheduleMode mode = ScheduleMode::two_stage;

  static WeightSchedule noisefree_default();
  static WeightSchedule noisy_default();
  static WeightSchedule one_stage(WeightParams p);
  static WeightSchedule constant_half();

  void validate() const;
  /// Active parameters at outer iteration k (1-based). Meaningless for constant_half.
  WeightParams stage(std::size_t k) const;
  /// Weights for iterate x at outer iteration k. t is clamped to x.size().
  Vector weights_for(std::span<const double> x, std::size_t k) const;

  friend bool operator==(const WeightSchedule&, const WeightSchedule&) = default;
};

/// Rank-based weights: ties in |x| go to the smaller index first.
/// Throws ZeroIterate for x = 0 and ContractViolation unless 2 ≤ t ≤ n, r > 0.
Vector build_weights(std::span<const double> x, std::size_t t, double r);

/// ‖w⊙x‖₁ / ‖(1−w)⊙x‖₂, with 0/0 defined as 0. Throws DegenerateDenominator
/// when x ≠ 0 but (1−w)⊙x = 0.
double eval_ratio(std::span<const double> x, std::span<const double> w);

/// Linearization vector y = α·sign(x) − λ·∇R_w(x) with the weights frozen:
/// α·sign(x) − λ(w⊙sign(x))/D + λ·N·((1−w)²⊙x)/D³.
Vector dca_linearization(std::span<const double> x, std::span<const double> w, double alpha,
                         double lambda);

/// Componentwise soft threshold.
Vector shrink(std::span<const double> v, double a);
double shrink(double v, double a);

inline double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

}  // namespace sortedl1l2
