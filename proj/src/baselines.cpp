#include "sortedl1l2/baselines.hpp"

#include <algorithm>
#include <string>

#include "sortedl1l2/errors.hpp"
#include "sortedl1l2/solver_noisy.hpp"

namespace sortedl1l2 {

namespace {

DcaPenalty l1_minus_l2_penalty(double lambda) {
  DcaPenalty p;
  p.l1_weight = lambda;
  p.linearize = [lambda](std::span<const double> x, std::size_t) {
    const double nx = norm2(x);
    if (nx == 0.0) throw ZeroIterate();
    Vector y(x.begin(), x.end());
    for (auto& v : y) v *= lambda / nx;
    return y;
  };
  p.value = [lambda](std::span<const double> x, std::size_t) { return lambda * (norm1(x) - norm2(x)); };
  return p;
}

}  // namespace

RecoveryResult solve_l1(const MeasurementProblem& problem, Setting setting, const SolverConfig& cfg) {
  if (setting == Setting::noisefree) return solve_l1_basis_pursuit(problem, cfg);
  return solve_lasso_admm(problem, l1_noisy_lambda(problem.A.rows()), cfg);
}

RecoveryResult solve_l1l2_ratio(const MeasurementProblem& problem, Setting setting, const SolverConfig& cfg) {
  SolverConfig c = cfg;
  c.schedule = WeightSchedule::constant_half();
  if (setting == Setting::noisefree) return solve_sorted_noisefree(problem, c);
  c.lambda = kL1L2NoisyLambda;
  c.alpha = kL1L2NoisyAlpha;
  c.delta = kL1L2NoisyDelta;
  return solve_sorted_noisy(problem, c);
}

RecoveryResult solve_l1_minus_l2(const MeasurementProblem& problem, Setting setting, const SolverConfig& cfg) {
  if (setting == Setting::noisefree) return run_dca_noisefree(problem, cfg, l1_minus_l2_penalty(1.0));
  const double lambda = l1_noisy_lambda(problem.A.rows());
  SolverConfig c = cfg;
  c.lambda = lambda;
  return run_dca_noisy(problem, c, l1_minus_l2_penalty(lambda));
}

const std::vector<std::string_view>& known_solvers() {
  static const std::vector<std::string_view> names{"l1", "l1l2", "l1-l2", "sorted", "sorted-1stage"};
  return names;
}

bool is_known_solver(std::string_view name) {
  const auto& names = known_solvers();
  return std::find(names.begin(), names.end(), name) != names.end();
}

RecoveryResult solve_by_name(std::string_view name, const MeasurementProblem& problem, Setting setting,
                             const SolverConfig& cfg) {
  if (name == "l1") return solve_l1(problem, setting, cfg);
  if (name == "l1l2") return solve_l1l2_ratio(problem, setting, cfg);
  if (name == "l1-l2") return solve_l1_minus_l2(problem, setting, cfg);
  if (name == "sorted" || name == "sorted-1stage") {
    SolverConfig c = cfg;
    if (name == "sorted-1stage") c.schedule = WeightSchedule::one_stage(cfg.schedule.stage2);
    return setting == Setting::noisefree ? solve_sorted_noisefree(problem, c) : solve_sorted_noisy(problem, c);
  }
  throw ContractViolation("unknown solver: " + std::string(name));
}

}  // namespace sortedl1l2
