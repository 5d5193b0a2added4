#include "sortedl1l2/regularizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "sortedl1l2/errors.hpp"

namespace sortedl1l2 {

std::string_view to_string(ScheduleMode mode) {
  switch (mode) {
    case ScheduleMode::two_stage:
      return "two_stage";
    case ScheduleMode::one_stage:
      return "one_stage";
    case ScheduleMode::constant_half:
      return "constant_half";
  }
  return "unknown";
}

ScheduleMode schedule_mode_from_string(std::string_view name) {
  if (name == "two_stage") return ScheduleMode::two_stage;
  if (name == "one_stage") return ScheduleMode::one_stage;
  if (name == "constant_half") return ScheduleMode::constant_half;
  throw ContractViolation("unknown schedule mode: " + std::string(name));
}

WeightSchedule WeightSchedule::noisefree_default() { return {{20, 0.8}, {27, 3.0}, 20, ScheduleMode::two_stage}; }

WeightSchedule WeightSchedule::noisy_default() { return {{100, 0.8}, {120, 3.0}, 20, ScheduleMode::two_stage}; }

WeightSchedule WeightSchedule::one_stage(WeightParams p) { return {p, p, 1, ScheduleMode::one_stage}; }

WeightSchedule WeightSchedule::constant_half() {
  WeightSchedule s;
  s.mode = ScheduleMode::constant_half;
  return s;
}

void WeightSchedule::validate() const {
  if (mode == ScheduleMode::constant_half) return;
  auto check = [](const WeightParams& p) {
    if (p.t < 2 || !(p.r > 0.0)) throw ContractViolation("weight stage needs t >= 2 and r > 0");
  };
  check(stage1);
  if (mode == ScheduleMode::two_stage) {
    check(stage2);
    if (switch_iter == 0) throw ContractViolation("switch_iter must be positive");
  }
}

WeightParams WeightSchedule::stage(std::size_t k) const {
  if (mode == ScheduleMode::two_stage && k > switch_iter) return stage2;
  return stage1;
}

Vector WeightSchedule::weights_for(std::span<const double> x, std::size_t k) const {
  if (mode == ScheduleMode::constant_half) {
    if (norm_inf(x) == 0.0) throw ZeroIterate();
    return Vector(x.size(), 0.5);
  }
  WeightParams p = stage(k);
  return build_weights(x, std::min(p.t, x.size()), p.r);
}

Vector build_weights(std::span<const double> x, std::size_t t, double r) {
  const std::size_t n = x.size();
  if (t < 2 || t > n) throw ContractViolation("build_weights: need 2 <= t <= n");
  if (!(r > 0.0)) throw ContractViolation("build_weights: r must be positive");
  if (norm_inf(x) == 0.0) throw ZeroIterate();

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto by_magnitude = [&](std::size_t a, std::size_t b) {
    const double fa = std::abs(x[a]);
    const double fb = std::abs(x[b]);
    return fa > fb || (fa == fb && a < b);
  };
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(t), order.end(),
                    by_magnitude);

  Vector w(n, 1.0);
  const double td = static_cast<double>(t);
  // rank p = 1..t gets e^{-r(t-p+1)/t}: every top-t entry stays below 1
  for (std::size_t p = 1; p <= t; ++p)
    w[order[p - 1]] = std::exp(-r * (td - static_cast<double>(p) + 1.0) / td);
  return w;
}

double eval_ratio(std::span<const double> x, std::span<const double> w) {
  if (w.size() != x.size()) throw ContractViolation("eval_ratio: weight length mismatch");
  double num = 0.0;
  double den = 0.0;
  bool nonzero = false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] != 0.0) nonzero = true;
    num += std::abs(w[i] * x[i]);
    const double c = (1.0 - w[i]) * x[i];
    den += c * c;
  }
  if (!nonzero) return 0.0;
  if (den == 0.0) throw DegenerateDenominator();
  return num / std::sqrt(den);
}

Vector dca_linearization(std::span<const double> x, std::span<const double> w, double alpha,
                         double lambda) {
  const std::size_t n = x.size();
  if (w.size() != n) throw ContractViolation("dca_linearization: weight length mismatch");
  if (norm_inf(x) == 0.0) throw ZeroIterate();
  double N = 0.0;
  double D2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    N += std::abs(w[i] * x[i]);
    const double c = (1.0 - w[i]) * x[i];
    D2 += c * c;
  }
  if (D2 == 0.0) throw DegenerateDenominator();
  const double D = std::sqrt(D2);
  const double D3 = D2 * D;
  Vector y(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = sign(x[i]);
    const double omw = 1.0 - w[i];
    y[i] = alpha * s - lambda * w[i] * s / D + lambda * N * omw * omw * x[i] / D3;
  }
  return y;
}

double shrink(double v, double a) {
  if (v > a) return v - a;
  if (v < -a) return v + a;
  return 0.0;
}

Vector shrink(std::span<const double> v, double a) {
  if (!(a >= 0.0)) throw ContractViolation("shrink: threshold must be nonnegative");
  Vector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = shrink(v[i], a);
  return out;
}

}  // namespace sortedl1l2
