#include "sortedl1l2/solver_noisy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "sortedl1l2/errors.hpp"

namespace sortedl1l2 {

double adaptive_lambda(std::size_t m, std::size_t n) {
  if (m == 0 || n == 0 || m > n) throw ContractViolation("adaptive_lambda: need 0 < m <= n");
  const double ratio = static_cast<double>(m) / static_cast<double>(n);
  return std::max(ratio * ratio - 0.1, 1e-4);
}

double l1_noisy_lambda(std::size_t m) { return 0.1 * static_cast<double>(m) / 270.0; }

std::size_t admm_l1_inner(const DenseMatrix& A, const SpdFactor& F_reg, std::span<const double> Atb,
                          std::span<const double> y, double alpha, double delta, std::size_t max_iter,
                          double tol, AdmmState& state) {
  const std::size_t n = A.cols();
  const double thresh = alpha / delta;
  Vector rhs(n);
  std::size_t steps = 0;
  for (std::size_t j = 0; j < max_iter; ++j) {
    for (std::size_t i = 0; i < n; ++i) rhs[i] = Atb[i] + delta * (state.z[i] - state.v[i]);
    Vector x = ridge_apply(A, F_reg, delta, rhs);
    for (std::size_t i = 0; i < n; ++i) {
      const double yi = y.empty() ? 0.0 : y[i];
      state.z[i] = shrink(x[i] + state.v[i] + yi / delta, thresh);
      state.v[i] += x[i] - state.z[i];
    }
    const double change = norm2(subtract(x, state.x));
    const double nx = norm2(x);
    state.x = std::move(x);
    ++steps;
    if (nx > 0.0 ? change / nx < tol : change == 0.0) break;
  }
  state.iterations += steps;
  return steps;
}

RecoveryResult solve_lasso_admm(const MeasurementProblem& problem, double lambda1, const SolverConfig& cfg) {
  if (!(lambda1 > 0.0)) throw ContractViolation("solve_lasso_admm: lambda must be positive");
  if (!(cfg.delta > 0.0)) throw ContractViolation("solve_lasso_admm: delta must be positive");
  const DenseMatrix& A = problem.A;
  const std::size_t n = A.cols();
  const double delta = cfg.delta;
  const SpdFactor F = cholesky_spd(outer_gram(A, delta));
  const Vector Atb = matvec_transposed(A, problem.b);

  RecoveryResult r;
  r.status = RecoveryStatus::converged;
  if (norm_inf(problem.b) == 0.0) {
    r.x.assign(n, 0.0);
    return r;
  }

  Vector z(n, 0.0);
  Vector v(n, 0.0);
  Vector rhs(n);
  const double thresh = lambda1 / delta;
  double primal = 0.0;
  double dual = 0.0;
  for (std::size_t it = 1; it <= cfg.lasso_max; ++it) {
    for (std::size_t i = 0; i < n; ++i) rhs[i] = Atb[i] + delta * (z[i] - v[i]);
    const Vector x = ridge_apply(A, F, delta, rhs);
    primal = 0.0;
    dual = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double zi = shrink(x[i] + v[i], thresh);
      dual += (zi - z[i]) * (zi - z[i]);
      z[i] = zi;
      const double res = x[i] - zi;
      v[i] += res;
      primal += res * res;
    }
    const double scale = std::max(1.0, norm2(x));
    primal = std::sqrt(primal) / scale;
    dual = delta * std::sqrt(dual) / scale;
    if (primal < cfg.tol_inner && dual < cfg.tol_inner) {
      r.x = z;
      r.outer_iters = it;
      const Vector res = subtract(matvec(A, r.x), problem.b);
      r.objective_trace.push_back(lambda1 * norm1(r.x) + 0.5 * dot(res, res));
      r.rel_change_trace.push_back(0.0);
      return r;
    }
  }
  throw InnerStall(primal, dual);
}

double sorted_noisy_objective(const MeasurementProblem& problem, std::span<const double> x,
                              std::span<const double> w, double lambda) {
  const Vector res = subtract(matvec(problem.A, x), problem.b);
  return lambda * eval_ratio(x, w) + 0.5 * dot(res, res);
}

RecoveryResult run_dca_noisy(const MeasurementProblem& problem, const SolverConfig& cfg,
                             const DcaPenalty& penalty) {
  cfg.validate();
  const DenseMatrix& A = problem.A;
  const std::size_t m = A.rows();
  const std::size_t n = A.cols();

  RecoveryResult result;
  {
    const double nb = norm2(problem.b);
    const double bound = nb * nb / (2.0 * (std::sqrt(static_cast<double>(n)) - cfg.delta));
    if (cfg.lambda >= bound) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "lambda %.6g is not below ||b||^2/(2(sqrt(n)-delta)) = %.6g", cfg.lambda,
                    bound);
      result.warnings.emplace_back(buf);
    }
  }

  const double init_lambda = cfg.init_lambda.value_or(l1_noisy_lambda(m));
  RecoveryResult init = solve_lasso_admm(problem, init_lambda, cfg);
  result.x = std::move(init.x);
  if (cfg.record_iterates) result.iterates.push_back(result.x);
  if (norm_inf(result.x) == 0.0) {
    result.status = RecoveryStatus::degenerate;
    return result;
  }

  const SpdFactor F = cholesky_spd(outer_gram(A, cfg.delta));
  const Vector Atb = matvec_transposed(A, problem.b);
  AdmmState state;
  state.x = result.x;
  state.z = result.x;
  state.v.assign(n, 0.0);

  auto data_term = [&](std::span<const double> x) {
    const Vector res = subtract(matvec(A, x), problem.b);
    return 0.5 * dot(res, res);
  };

  result.status = RecoveryStatus::max_iters;
  for (std::size_t k = 1; k <= cfg.outer_max; ++k) {
    Vector y;
    try {
      y = penalty.linearize(result.x, k);
    } catch (const ZeroIterate&) {
      result.status = RecoveryStatus::degenerate;
      return result;
    } catch (const DegenerateDenominator&) {
      result.status = RecoveryStatus::degenerate;
      return result;
    }
    admm_l1_inner(A, F, Atb, y, penalty.l1_weight, cfg.delta, cfg.inner_max, cfg.tol_inner, state);

    // the shrinkage iterate z is the sparse one; x from the ridge step is dense
    const double nx = norm2(state.z);
    const double diff = norm2(subtract(state.z, result.x));
    const double rel = diff == 0.0 ? 0.0 : (nx > 0.0 ? diff / nx : diff);
    result.x = state.z;
    result.outer_iters = k;
    result.rel_change_trace.push_back(rel);
    result.objective_trace.push_back(penalty.value(result.x, k) + data_term(result.x));
    if (cfg.record_iterates) result.iterates.push_back(result.x);
    if (norm_inf(result.x) == 0.0) {
      result.status = RecoveryStatus::degenerate;
      return result;
    }
    if (rel < cfg.tol_outer || rel == 0.0) {
      result.status = RecoveryStatus::converged;
      break;
    }
  }
  return result;
}

RecoveryResult solve_sorted_noisy(const MeasurementProblem& problem, const SolverConfig& cfg) {
  return run_dca_noisy(problem, cfg, sorted_penalty(cfg, cfg.lambda));
}

}  // namespace sortedl1l2
