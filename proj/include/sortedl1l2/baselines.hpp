#pragma once

#include <string_view>
#include <vector>

#include "sortedl1l2/solver.hpp"

namespace sortedl1l2 {

enum class Setting { noisefree, noisy };

/// Noisy ℓ1/ℓ2 baseline parameters.
inline constexpr double kL1L2NoisyLambda = 0.06;
inline constexpr double kL1L2NoisyAlpha = 0.05;
inline constexpr double kL1L2NoisyDelta = 0.9;

/// Basis pursuit (noise-free) or lasso with λ = 0.1·m/270 (noisy).
RecoveryResult solve_l1(const MeasurementProblem& problem, Setting setting, const SolverConfig& cfg);

/// Plain ℓ1/ℓ2: the sorted solvers with w ≡ 1/2. The noisy variant uses
/// λ = 0.06, α = 0.05, δ = 0.9 regardless of cfg.
RecoveryResult solve_l1l2_ratio(const MeasurementProblem& problem, Setting setting, const SolverConfig& cfg);

/// ℓ1 − ℓ2 by DCA with y^k = λ·x^k/‖x^k‖₂ (λ = 1 noise-free, 0.1·m/270 noisy).
RecoveryResult solve_l1_minus_l2(const MeasurementProblem& problem, Setting setting, const SolverConfig& cfg);

/// Dispatch on "l1", "l1l2", "l1-l2", "sorted" (and "sorted-1stage", the
/// sorted solver with the second-stage parameters used throughout).
RecoveryResult solve_by_name(std::string_view name, const MeasurementProblem& problem, Setting setting,
                             const SolverConfig& cfg);

bool is_known_solver(std::string_view name);
const std::vector<std::string_view>& known_solvers();

}  // namespace sortedl1l2
