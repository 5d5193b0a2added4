#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "sortedl1l2/linalg.hpp"

namespace sortedl1l2 {

/// min cᵀx  s.t.  A_eq·x = b_eq,  lower ≤ x ≤ upper (all bounds finite).
struct BoundedLp {
  Vector c;
  DenseMatrix A_eq;
  Vector b_eq;
  Vector lower;
  Vector upper;

  std::size_t num_vars() const noexcept { return c.size(); }
  std::size_t num_rows() const noexcept { return b_eq.size(); }
  void validate() const;
};

enum class LpStatus { optimal, infeasible };

/// A basis that can seed a later solve with the same constraints: the M basic
/// columns (row order) plus which nonbasic variables sit at their upper bound.
struct LpBasis {
  std::vector<std::size_t> basic;
  std::vector<bool> at_upper;
};

struct LpSolution {
  Vector x;
  double objective = 0.0;
  LpStatus status = LpStatus::infeasible;
  std::size_t pivots = 0;
  /// Equality-row multipliers π with reduced costs d = c − A_eqᵀπ.
  Vector duals;
  Vector reduced_costs;
  /// Only filled when the final basis is free of artificial columns.
  std::optional<LpBasis> basis;
};

struct LpOptions {
  double pivot_tol = 1e-9;
  double feasibility_tol = 1e-8;
  double optimality_tol = 1e-9;
  std::size_t refactor_every = 50;
};

/// Two-phase bounded-variable revised simplex. Dantzig pricing, switching to
/// Bland's rule after 3·(N+M) pivots without objective progress. Throws
/// PivotLimit after 10·N·M pivots. A feasible warm basis skips phase 1; an
/// unusable one is ignored.
LpSolution solve_bounded_lp(const BoundedLp& lp, const LpBasis* warm = nullptr,
                            const LpOptions& options = {});

/// Checks primal feasibility (bounds exact, ‖A_eq·x − b_eq‖∞ ≤ tol·max(1,‖b_eq‖∞))
/// and the sign pattern of c − A_eqᵀπ at the returned x, recomputed from the
/// problem data rather than taken from the solver.
bool certify_optimal(const BoundedLp& lp, const LpSolution& sol, double tol = 1e-8);

/// The split encoding of  min α‖x‖₁ − ⟨x,y⟩  s.t.  Ax = b,  |xᵢ| ≤ bound:
/// variables (x⁺, x⁻) ∈ [0, bound]^{2n}, cost (α1 − y, α1 + y), rows [A, −A].
BoundedLp build_split_lp(const DenseMatrix& A, std::span<const double> b,
                         std::span<const double> y, double alpha, double bound = 1.0);

/// x = x̂(1..n) − x̂(n+1..2n)
Vector merge_split(std::span<const double> xhat);

}  // namespace sortedl1l2
