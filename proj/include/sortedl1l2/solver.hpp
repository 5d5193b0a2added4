#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sortedl1l2/linalg.hpp"
#include "sortedl1l2/problems.hpp"
#include "sortedl1l2/regularizer.hpp"

namespace sortedl1l2 {

enum class SubproblemKind { lp, admm };

std::string_view to_string(SubproblemKind kind);
SubproblemKind subproblem_from_string(std::string_view name);

struct SolverConfig {
  double alpha = 1.0;
  double lambda = 1.0;
  /// ADMM penalty.
  double delta = 0.8;
  std::size_t outer_max = 100;
  std::size_t inner_max = 20;
  double tol_outer = 1e-8;
  double tol_inner = 1e-6;
  SubproblemKind subproblem = SubproblemKind::lp;
  /// Constrain |xᵢ| ≤ 1. Without it the LP route uses a bound of kUnboxedBound.
  bool box = true;
  WeightSchedule schedule = WeightSchedule::noisefree_default();
  /// Iteration cap of the exact-constraint ADMM subproblem.
  std::size_t admm_exact_max = 2000;
  /// Iteration cap of the lasso initializer.
  std::size_t lasso_max = 5000;
  /// λ of the lasso initializer in the noisy setting; 0.1·m/270 when unset.
  std::optional<double> init_lambda;
  /// Keep every outer iterate in RecoveryResult::iterates.
  bool record_iterates = false;

  static constexpr double kUnboxedBound = 1e6;

  static SolverConfig noisefree_default();
  /// δ = 0.8, α = 0.1, λ = adaptive_lambda(m, n), noisy two-stage schedule.
  static SolverConfig noisy_default(std::size_t m, std::size_t n);

  double box_bound() const noexcept { return box ? 1.0 : kUnboxedBound; }
  void validate() const;
};

enum class RecoveryStatus { converged, max_iters, degenerate };

std::string_view to_string(RecoveryStatus status);

struct RecoveryResult {
  Vector x;
  std::size_t outer_iters = 0;
  std::vector<double> objective_trace;
  std::vector<double> rel_change_trace;
  RecoveryStatus status = RecoveryStatus::max_iters;
  /// Outer iterates x^1, x^2, ... when SolverConfig::record_iterates is set;
  /// the first entry is the initializer.
  std::vector<Vector> iterates;
  std::vector<std::string> warnings;
};

/// A DCA penalty G − H where G is the weighted ℓ1 of the subproblem. The
/// engines below only need the linearization y^k = ∂H(x^k) and the penalty
/// value used for the objective trace.
struct DcaPenalty {
  /// ℓ1 weight of the convex part (α of the subproblem).
  double l1_weight = 1.0;
  std::function<Vector(std::span<const double> x, std::size_t k)> linearize;
  /// Penalty value at x under the stage-k parameters (includes λ).
  std::function<double(std::span<const double> x, std::size_t k)> value;
};

/// Sorted ratio penalty: H = α‖x‖₁ − λR_w(x) with weights from cfg.schedule.
DcaPenalty sorted_penalty(const SolverConfig& cfg, double lambda);

// ---- noise-free (constrained) ------------------------------------------

/// min ‖x‖₁ s.t. Ax = b, x in the box; one split LP with y = 0, α = 1.
/// Throws InfeasibleConstraint when no feasible point exists.
RecoveryResult solve_l1_basis_pursuit(const MeasurementProblem& problem, const SolverConfig& cfg);

/// The DCA outer loop for  min penalty(x)  s.t.  Ax = b, starting from basis
/// pursuit, with the LP or ADMM subproblem chosen by cfg.subproblem.
RecoveryResult run_dca_noisefree(const MeasurementProblem& problem, const SolverConfig& cfg,
                                 const DcaPenalty& penalty);

/// Sorted L1/L2 with exact constraints.
RecoveryResult solve_sorted_noisefree(const MeasurementProblem& problem, const SolverConfig& cfg);

/// Scaled ADMM iterates, shared by the subproblem solvers.
struct AdmmState {
  Vector x;
  Vector z;
  Vector v;
  std::size_t iterations = 0;
};

/// min α‖z‖₁ − ⟨z,y⟩ (+ box) s.t. Ax = b through x = z splitting:
///   x ← P(z − v),  z ← clip(shrink(x + v + y/δ, α/δ)),  v ← v + x − z.
/// Stops once primal ‖x−z‖ and dual δ‖z−z_prev‖ fall below
/// tol_inner·max(1,‖x‖); throws InnerStall after cfg.admm_exact_max steps.
/// When `state` is given it seeds the iteration and receives the final
/// iterates. Returns P(z), which satisfies Ax = b.
Vector solve_subproblem_admm(const DenseMatrix& A, const SpdFactor& F_AAt, std::span<const double> b,
                             std::span<const double> y, const SolverConfig& cfg,
                             AdmmState* state = nullptr);

}  // namespace sortedl1l2
