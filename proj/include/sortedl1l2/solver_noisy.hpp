#pragma once

#include <cstddef>
#include <span>

#include "sortedl1l2/solver.hpp"

namespace sortedl1l2 {

/// m²/n² − 0.1, clamped below at 1e-4.
double adaptive_lambda(std::size_t m, std::size_t n);

/// 0.1·m/270, the λ used for the ℓ1 baseline and the noisy initializer.
double l1_noisy_lambda(std::size_t m);

/// Runs up to `max_iter` scaled ADMM steps on
///   min α‖z‖₁ + ½‖Ax − b‖² − ⟨z, y⟩  s.t.  x = z:
///   x ← (AᵀA + δI)⁻¹(Aᵀb + δ(z − v)),  z ← shrink(x + v + y/δ, α/δ),  v ← v + x − z,
/// stopping early when ‖x_j − x_{j−1}‖/‖x_j‖ < tol. `Atb` is Aᵀb and
/// F_reg the factor of δI + AAᵀ. Returns the number of steps taken.
std::size_t admm_l1_inner(const DenseMatrix& A, const SpdFactor& F_reg, std::span<const double> Atb,
                          std::span<const double> y, double alpha, double delta, std::size_t max_iter,
                          double tol, AdmmState& state);

/// min λ₁‖x‖₁ + ½‖Ax − b‖² by scaled ADMM. Stops when ‖x−z‖/max(1,‖x‖) and
/// δ‖z−z_prev‖/max(1,‖x‖) are both below cfg.tol_inner; throws InnerStall
/// after cfg.lasso_max steps. Returns the sparse iterate z.
RecoveryResult solve_lasso_admm(const MeasurementProblem& problem, double lambda1, const SolverConfig& cfg);

/// DCA outer loop for  min penalty(x) + ½‖Ax − b‖²  with `cfg.inner_max`
/// inner ADMM steps per outer iteration, started from the lasso solution.
RecoveryResult run_dca_noisy(const MeasurementProblem& problem, const SolverConfig& cfg,
                             const DcaPenalty& penalty);

/// Sorted L1/L2, unconstrained form, λ = cfg.lambda.
RecoveryResult solve_sorted_noisy(const MeasurementProblem& problem, const SolverConfig& cfg);

/// F(x) = λR_w(x) + ½‖Ax − b‖² with the weights built from x itself.
double sorted_noisy_objective(const MeasurementProblem& problem, std::span<const double> x,
                              std::span<const double> w, double lambda);

}  // namespace sortedl1l2
