#include <doctest.h>

#include <cmath>
#include <random>

#include "sortedl1l2/errors.hpp"
#include "sortedl1l2/lp.hpp"
#include "sortedl1l2/metrics.hpp"
#include "sortedl1l2/problems.hpp"
#include "sortedl1l2/solver.hpp"
#include "sortedl1l2/solver_noisy.hpp"
#include "test_support.hpp"

using namespace sortedl1l2;
using namespace testing_support;

namespace {

MeasurementProblem problem_from(DenseMatrix A, Vector b) {
  MeasurementProblem p;
  p.A = std::move(A);
  p.b = std::move(b);
  return p;
}

DenseMatrix toy_matrix(double a) { return DenseMatrix{{1, 0, a, 0}, {0, 1, -2, 0}, {0, 1, 0, -2}}; }

double subproblem_objective(std::span<const double> x, std::span<const double> y, double alpha) {
  return alpha * norm1(x) - dot(x, y);
}

}  // namespace

// ---- noise-free ----------------------------------------------------------

TEST_CASE("basis pursuit small cases") {
  const SolverConfig cfg = SolverConfig::noisefree_default();
  const RecoveryResult id = solve_l1_basis_pursuit(problem_from(DenseMatrix::identity(2), {0.3, 0.0}), cfg);
  CHECK(id.x[0] == doctest::Approx(0.3));
  CHECK(id.x[1] == doctest::Approx(0.0));

  const RecoveryResult zero = solve_l1_basis_pursuit(problem_from(toy_matrix(-3), {0, 0, 0}), cfg);
  CHECK(norm_inf(zero.x) == 0.0);

  // a = -3: ℓ1 prefers k = -1/3, i.e. (0, 1/3, -1/3, -1/3)
  const RecoveryResult toy = solve_l1_basis_pursuit(problem_from(toy_matrix(-3), {1, 1, 1}), cfg);
  CHECK(norm1(toy.x) == doctest::Approx(1.0));
  CHECK(toy.x[0] == doctest::Approx(0.0));
  CHECK(toy.x[1] == doctest::Approx(1.0 / 3));
  CHECK(toy.x[2] == doctest::Approx(-1.0 / 3));
  CHECK(toy.x[3] == doctest::Approx(-1.0 / 3));

  CHECK_THROWS_AS(solve_l1_basis_pursuit(problem_from(DenseMatrix{{1, 1}}, {5.0}), cfg), InfeasibleConstraint);
}

TEST_CASE("sorted solver picks the sparsest toy solution") {
  SolverConfig cfg = SolverConfig::noisefree_default();
  cfg.schedule = WeightSchedule::one_stage({2, 5.0});
  for (double a : {-3.0, 3.5, 4.0}) {
    const RecoveryResult r = solve_sorted_noisefree(problem_from(toy_matrix(a), {1, 1, 1}), cfg);
    CHECK(relative_error(r.x, Vector{1, 1, 0, 0}) < 1e-3);
  }
}

TEST_CASE("sorted solver on a seeded DCT instance") {
  ProblemSpec spec;
  spec.seed = 2024;
  const MeasurementProblem p = make_problem(spec);
  SolverConfig cfg = SolverConfig::noisefree_default();
  cfg.record_iterates = true;
  const RecoveryResult r = solve_sorted_noisefree(p, cfg);
  CHECK(relative_error(r.x, *p.ground_truth) < 1e-3);
  CHECK(r.rel_change_trace.size() == r.outer_iters);
  CHECK(r.objective_trace.size() == r.outer_iters);
  for (double v : r.rel_change_trace) CHECK(v >= 0.0);
  for (const Vector& x : r.iterates) {
    const Vector res = subtract(matvec(p.A, x), p.b);
    CHECK(norm_inf(res) <= 1e-8 * std::max(1.0, norm_inf(p.b)));
  }
}

TEST_CASE("a unique feasible point is a fixed point") {
  const MeasurementProblem p = problem_from(DenseMatrix{{2, 0, 0}, {0, 1, 0}, {0, 0, 4}}, {1, -0.5, 2});
  const RecoveryResult r = solve_sorted_noisefree(p, SolverConfig::noisefree_default());
  CHECK(r.status == RecoveryStatus::converged);
  CHECK(r.outer_iters <= 2);
  CHECK(r.x[0] == doctest::Approx(0.5));
  CHECK(r.x[1] == doctest::Approx(-0.5));
  CHECK(r.x[2] == doctest::Approx(0.5));
}

TEST_CASE("ADMM route agrees with the LP route") {
  std::mt19937_64 rng(55);
  SolverConfig cfg = SolverConfig::noisefree_default();
  cfg.tol_inner = 1e-9;
  cfg.admm_exact_max = 200000;
  for (int rep = 0; rep < 10; ++rep) {
    const DenseMatrix A = random_matrix(rng, 10, 30);
    const Vector b = matvec(A, random_vector(rng, 30, 0.2));
    const Vector y = random_vector(rng, 30, 0.5);
    const LpSolution lp = solve_bounded_lp(build_split_lp(A, b, y, cfg.alpha));
    REQUIRE(lp.status == LpStatus::optimal);
    const Vector x_lp = merge_split(lp.x);
    const SpdFactor F = cholesky_spd(outer_gram(A));
    const Vector x_admm = solve_subproblem_admm(A, F, b, y, cfg);
    const double f_lp = subproblem_objective(x_lp, y, cfg.alpha);
    const double f_admm = subproblem_objective(x_admm, y, cfg.alpha);
    CHECK(std::abs(f_lp - f_admm) <= 1e-6 * std::max(1.0, std::abs(f_lp)));
  }
}

TEST_CASE("ADMM subproblem on a square system") {
  SolverConfig cfg = SolverConfig::noisefree_default();
  cfg.alpha = 1e-3;
  const DenseMatrix A{{2, 1, 0}, {0, 1, 0}, {1, 0, 3}};
  const Vector b{0.5, 0.2, -0.3};
  const Vector x = solve_subproblem_admm(A, cholesky_spd(outer_gram(A)), b, Vector(3, 0.0), cfg);
  const Vector ref = gauss_solve(A, b);
  CHECK(max_abs_diff(x, ref) <= 1e-6);
}

TEST_CASE("ADMM subproblem starting at an LP optimum stays put") {
  std::mt19937_64 rng(77);
  SolverConfig cfg = SolverConfig::noisefree_default();
  cfg.tol_inner = 1e-10;
  cfg.admm_exact_max = 200000;
  const DenseMatrix A = random_matrix(rng, 6, 15);
  const Vector b = matvec(A, random_vector(rng, 15, 0.2));
  const Vector y = random_vector(rng, 15, 0.4);
  const SpdFactor F = cholesky_spd(outer_gram(A));
  AdmmState state;
  const Vector x1 = solve_subproblem_admm(A, F, b, y, cfg, &state);
  AdmmState again = state;
  const Vector x2 = solve_subproblem_admm(A, F, b, y, cfg, &again);
  CHECK(max_abs_diff(x1, x2) <= 1e-8);
}

TEST_CASE("config validation") {
  SolverConfig cfg;
  cfg.alpha = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ContractViolation);
  cfg = {};
  cfg.outer_max = 10;
  CHECK_THROWS_AS(cfg.validate(), ContractViolation);  // switch_iter 20 > outer_max
  CHECK(subproblem_from_string("admm") == SubproblemKind::admm);
  CHECK_THROWS_AS(subproblem_from_string("ipm"), ContractViolation);
}

// ---- noisy ---------------------------------------------------------------

TEST_CASE("adaptive lambda") {
  // (300/512)^2 - 0.1 = 0.2433228...
  CHECK(adaptive_lambda(300, 512) == doctest::Approx(0.24332275390625).epsilon(1e-12));
  CHECK(adaptive_lambda(512, 512) == doctest::Approx(0.9));
  CHECK(adaptive_lambda(100, 512) == 1e-4);
  CHECK_THROWS_AS(adaptive_lambda(600, 512), ContractViolation);
  CHECK(l1_noisy_lambda(270) == doctest::Approx(0.1));
}

TEST_CASE("lasso closed forms") {
  SolverConfig cfg = SolverConfig::noisy_default(1, 1);
  CHECK(solve_lasso_admm(problem_from(DenseMatrix{{1.0}}, {2.0}), 0.5, cfg).x[0] == doctest::Approx(1.5));

  std::mt19937_64 rng(91);
  const DenseMatrix A = random_matrix(rng, 8, 20);
  CHECK(norm_inf(solve_lasso_admm(problem_from(A, Vector(8, 0.0)), 0.1, cfg).x) == 0.0);
  const Vector b = random_vector(rng, 8);
  const double lmax = norm_inf(matvec_transposed(A, b));
  CHECK(norm_inf(solve_lasso_admm(problem_from(A, b), lmax * 1.01, cfg).x) == 0.0);
}

TEST_CASE("lasso optimality certificate") {
  ProblemSpec spec;
  spec.matrix_kind = MatrixKind::correlated_gaussian;
  spec.coherence_param = 0.0;
  spec.m = 100;
  spec.n = 200;
  spec.sparsity = 20;
  spec.noise_sigma = 0.1;
  spec.normalize_columns = true;
  spec.seed = 5;
  const MeasurementProblem p = make_problem(spec);
  const double lam = 0.05;
  const Vector x = solve_lasso_admm(p, lam, SolverConfig::noisy_default(100, 200)).x;
  const Vector g = matvec_transposed(p.A, subtract(matvec(p.A, x), p.b));
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] != 0.0)
      CHECK(std::abs(g[i] + lam * sign(x[i])) <= 1e-4);
    else
      CHECK(std::abs(g[i]) <= lam + 1e-4);
  }
}

TEST_CASE("inner ADMM with y = 0 is the lasso with lambda = alpha") {
  ProblemSpec spec;
  spec.matrix_kind = MatrixKind::correlated_gaussian;
  spec.coherence_param = 0.0;
  spec.m = 60;
  spec.n = 120;
  spec.sparsity = 10;
  spec.noise_sigma = 0.05;
  spec.normalize_columns = true;
  spec.seed = 8;
  const MeasurementProblem p = make_problem(spec);
  SolverConfig cfg = SolverConfig::noisy_default(60, 120);
  cfg.tol_inner = 1e-12;
  cfg.lasso_max = 100000;
  const Vector lasso = solve_lasso_admm(p, cfg.alpha, cfg).x;

  AdmmState st;
  st.x.assign(120, 0.0);
  st.z.assign(120, 0.0);
  st.v.assign(120, 0.0);
  const SpdFactor F = cholesky_spd(outer_gram(p.A, cfg.delta));
  admm_l1_inner(p.A, F, matvec_transposed(p.A, p.b), Vector(120, 0.0), cfg.alpha, cfg.delta, 100000, 1e-14, st);
  CHECK(max_abs_diff(st.z, lasso) <= 1e-8);
}

TEST_CASE("noisy sorted solver on clean data") {
  ProblemSpec spec;
  spec.matrix_kind = MatrixKind::correlated_gaussian;
  spec.coherence_param = 0.0;
  spec.m = 360;
  spec.n = 512;
  spec.sparsity = 20;
  spec.normalize_columns = true;
  spec.seed = 3;
  const MeasurementProblem p = make_problem(spec);
  const SolverConfig cfg = SolverConfig::noisy_default(360, 512);
  const RecoveryResult r = solve_sorted_noisy(p, cfg);
  const RecoveryResult init = solve_lasso_admm(p, l1_noisy_lambda(360), cfg);
  // the l1 term leaves a shrinkage bias, but less than the lasso start
  const double e = relative_error(r.x, *p.ground_truth);
  CHECK(e < 0.1);
  CHECK(e < relative_error(init.x, *p.ground_truth));
  // entries below about 0.08 fall under the threshold; nothing spurious survives
  CHECK(support_scores(r.x, *p.ground_truth, default_zero_tol(r.x)).precision == 1.0);
}

TEST_CASE("noisy solver with b = 0 is degenerate") {
  std::mt19937_64 rng(1);
  const MeasurementProblem p = problem_from(random_matrix(rng, 10, 20), Vector(10, 0.0));
  const RecoveryResult r = solve_sorted_noisy(p, SolverConfig::noisy_default(10, 20));
  CHECK(r.status == RecoveryStatus::degenerate);
  CHECK(norm_inf(r.x) == 0.0);
}

TEST_CASE("constant half weights equal a hand-coded l1/l2 penalty") {
  ProblemSpec spec;
  spec.matrix_kind = MatrixKind::correlated_gaussian;
  spec.coherence_param = 0.1;
  spec.m = 80;
  spec.n = 160;
  spec.sparsity = 15;
  spec.noise_sigma = 0.1;
  spec.normalize_columns = true;
  spec.seed = 12;
  const MeasurementProblem p = make_problem(spec);
  SolverConfig cfg = SolverConfig::noisy_default(80, 160);
  cfg.schedule = WeightSchedule::constant_half();
  cfg.lambda = 0.06;
  cfg.alpha = 0.05;
  cfg.delta = 0.9;
  cfg.outer_max = 30;
  const RecoveryResult lib = run_dca_noisy(p, cfg, sorted_penalty(cfg, cfg.lambda));

  DcaPenalty hand;
  hand.l1_weight = cfg.alpha;
  const double alpha = cfg.alpha;
  const double lambda = cfg.lambda;
  hand.linearize = [=](std::span<const double> x, std::size_t) {
    const double l1 = norm1(x);
    const double l2 = norm2(x);
    Vector y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
      y[i] = alpha * sign(x[i]) - lambda * (sign(x[i]) / l2 - l1 * x[i] / (l2 * l2 * l2));
    return y;
  };
  hand.value = [=](std::span<const double> x, std::size_t) { return lambda * norm1(x) / norm2(x); };
  const RecoveryResult ref = run_dca_noisy(p, cfg, hand);
  REQUIRE(lib.x.size() == ref.x.size());
  CHECK(max_abs_diff(lib.x, ref.x) <= 1e-10);
  REQUIRE(lib.objective_trace.size() == ref.objective_trace.size());
  for (std::size_t k = 0; k < lib.objective_trace.size(); ++k)
    CHECK(std::abs(lib.objective_trace[k] - ref.objective_trace[k]) <= 1e-10);
}
