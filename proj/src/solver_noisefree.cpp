#include <algorithm>
#include <cmath>
#include <string>

#include "sortedl1l2/errors.hpp"
#include "sortedl1l2/lp.hpp"
#include "sortedl1l2/solver.hpp"
#include "sortedl1l2/solver_noisy.hpp"

namespace sortedl1l2 {

std::string_view to_string(SubproblemKind kind) { return kind == SubproblemKind::lp ? "lp" : "admm"; }

SubproblemKind subproblem_from_string(std::string_view name) {
  if (name == "lp") return SubproblemKind::lp;
  if (name == "admm") return SubproblemKind::admm;
  throw ContractViolation("unknown subproblem solver: " + std::string(name));
}

std::string_view to_string(RecoveryStatus status) {
  switch (status) {
    case RecoveryStatus::converged:
      return "converged";
    case RecoveryStatus::max_iters:
      return "max_iters";
    case RecoveryStatus::degenerate:
      return "degenerate";
  }
  return "unknown";
}

SolverConfig SolverConfig::noisefree_default() { return SolverConfig{}; }

SolverConfig SolverConfig::noisy_default(std::size_t m, std::size_t n) {
  SolverConfig cfg;
  cfg.alpha = 0.1;
  cfg.delta = 0.8;
  cfg.lambda = adaptive_lambda(m, n);
  cfg.tol_outer = 1e-6;
  cfg.schedule = WeightSchedule::noisy_default();
  return cfg;
}

void SolverConfig::validate() const {
  if (!(alpha > 0.0) || !(lambda > 0.0) || !(delta > 0.0))
    throw ContractViolation("solver config: alpha, lambda and delta must be positive");
  if (outer_max == 0 || inner_max == 0) throw ContractViolation("solver config: iteration caps must be positive");
  if (!(tol_outer >= 0.0) || !(tol_inner >= 0.0)) throw ContractViolation("solver config: tolerances must be nonnegative");
  if (schedule.mode == ScheduleMode::two_stage && schedule.switch_iter > outer_max)
    throw ContractViolation("solver config: switch_iter exceeds outer_max");
  if (init_lambda && !(*init_lambda > 0.0)) throw ContractViolation("solver config: init_lambda must be positive");
  schedule.validate();
}

DcaPenalty sorted_penalty(const SolverConfig& cfg, double lambda) {
  DcaPenalty p;
  p.l1_weight = cfg.alpha;
  const WeightSchedule schedule = cfg.schedule;
  const double alpha = cfg.alpha;
  p.linearize = [schedule, alpha, lambda](std::span<const double> x, std::size_t k) {
    const Vector w = schedule.weights_for(x, k);
    return dca_linearization(x, w, alpha, lambda);
  };
  p.value = [schedule, lambda](std::span<const double> x, std::size_t k) {
    if (norm_inf(x) == 0.0) return 0.0;
    return lambda * eval_ratio(x, schedule.weights_for(x, k));
  };
  return p;
}

namespace {

double relative_change(std::span<const double> now, std::span<const double> before) {
  const double nx = norm2(now);
  const double diff = norm2(subtract(now, before));
  if (diff == 0.0) return 0.0;
  return nx > 0.0 ? diff / nx : diff;
}

}  // namespace

RecoveryResult solve_l1_basis_pursuit(const MeasurementProblem& problem, const SolverConfig& cfg) {
  const Vector zero(problem.A.cols(), 0.0);
  const BoundedLp lp = build_split_lp(problem.A, problem.b, zero, 1.0, cfg.box_bound());
  const LpSolution sol = solve_bounded_lp(lp);
  if (sol.status != LpStatus::optimal) throw InfeasibleConstraint();
  RecoveryResult r;
  r.x = merge_split(sol.x);
  r.outer_iters = 1;
  r.objective_trace.push_back(norm1(r.x));
  r.rel_change_trace.push_back(0.0);
  r.status = RecoveryStatus::converged;
  if (cfg.record_iterates) r.iterates.push_back(r.x);
  return r;
}

Vector solve_subproblem_admm(const DenseMatrix& A, const SpdFactor& F_AAt, std::span<const double> b,
                             std::span<const double> y, const SolverConfig& cfg, AdmmState* state) {
  const std::size_t n = A.cols();
  if (y.size() != n) throw ContractViolation("solve_subproblem_admm: y length mismatch");
  const double delta = cfg.delta;
  const double thresh = cfg.alpha / delta;
  const double bound = cfg.box_bound();

  AdmmState local;
  AdmmState& s = state ? *state : local;
  if (s.z.size() != n || s.v.size() != n) {
    s.z = affine_project(A, F_AAt, b, Vector(n, 0.0));
    s.v.assign(n, 0.0);
  }
  s.iterations = 0;
  Vector arg(n);
  double primal = 0.0;
  double dual = 0.0;
  for (std::size_t j = 0; j < cfg.admm_exact_max; ++j) {
    for (std::size_t i = 0; i < n; ++i) arg[i] = s.z[i] - s.v[i];
    s.x = affine_project(A, F_AAt, b, arg);
    primal = 0.0;
    dual = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double zi = std::clamp(shrink(s.x[i] + s.v[i] + y[i] / delta, thresh), -bound, bound);
      const double dz = zi - s.z[i];
      dual += dz * dz;
      s.z[i] = zi;
      const double r = s.x[i] - zi;
      s.v[i] += r;
      primal += r * r;
    }
    primal = std::sqrt(primal);
    dual = delta * std::sqrt(dual);
    ++s.iterations;
    const double scale = cfg.tol_inner * std::max(1.0, norm2(s.x));
    if (primal <= scale && dual <= scale) return affine_project(A, F_AAt, b, s.z);
  }
  throw InnerStall(primal, dual);
}

RecoveryResult run_dca_noisefree(const MeasurementProblem& problem, const SolverConfig& cfg,
                                 const DcaPenalty& penalty) {
  cfg.validate();
  const DenseMatrix& A = problem.A;
  const std::size_t n = A.cols();

  RecoveryResult init = solve_l1_basis_pursuit(problem, cfg);
  RecoveryResult result;
  result.x = std::move(init.x);
  if (cfg.record_iterates) result.iterates.push_back(result.x);
  if (norm_inf(result.x) == 0.0) {
    result.status = RecoveryStatus::degenerate;
    return result;
  }

  SolverConfig sub_cfg = cfg;
  sub_cfg.alpha = penalty.l1_weight;

  BoundedLp lp;
  std::optional<LpBasis> basis;
  std::optional<SpdFactor> F_AAt;
  AdmmState admm;
  if (cfg.subproblem == SubproblemKind::lp) {
    lp = build_split_lp(A, problem.b, Vector(n, 0.0), penalty.l1_weight, cfg.box_bound());
  } else {
    F_AAt = cholesky_spd(outer_gram(A));
  }

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

    Vector next;
    if (cfg.subproblem == SubproblemKind::lp) {
      for (std::size_t j = 0; j < n; ++j) {
        lp.c[j] = penalty.l1_weight - y[j];
        lp.c[n + j] = penalty.l1_weight + y[j];
      }
      LpSolution sol = solve_bounded_lp(lp, basis ? &*basis : nullptr);
      if (sol.status != LpStatus::optimal) throw InfeasibleConstraint();
      basis = std::move(sol.basis);
      next = merge_split(sol.x);
    } else {
      next = solve_subproblem_admm(A, *F_AAt, problem.b, y, sub_cfg, &admm);
    }

    const double rel = relative_change(next, result.x);
    result.x = std::move(next);
    result.outer_iters = k;
    result.rel_change_trace.push_back(rel);
    result.objective_trace.push_back(penalty.value(result.x, k));
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

RecoveryResult solve_sorted_noisefree(const MeasurementProblem& problem, const SolverConfig& cfg) {
  return run_dca_noisefree(problem, cfg, sorted_penalty(cfg, 1.0));
}

}  // namespace sortedl1l2
