#include <doctest.h>

#include <cmath>
#include <random>

#include "sortedl1l2/errors.hpp"
#include "sortedl1l2/metrics.hpp"
#include "sortedl1l2/problems.hpp"
#include "test_support.hpp"

using namespace sortedl1l2;
using namespace testing_support;

TEST_CASE("relative error") {
  const Vector t{1, 0};
  CHECK(relative_error(t, t) == 0.0);
  CHECK(relative_error(Vector{0, 0}, t) == 1.0);
  CHECK(relative_error(Vector{1, 0.3}, t) == doctest::Approx(0.3));
  CHECK_THROWS_AS(relative_error(t, Vector{0, 0}), ContractViolation);
}

TEST_CASE("mse") {
  CHECK(mse(Vector{1, 2}, Vector{1, 2}) == 0.0);
  CHECK(mse(Vector{1, 1}, Vector{0, 0}) == 1.0);
  const Vector x{0.3, -1, 2};
  const Vector t{0, 0.5, 1};
  Vector cx = x;
  Vector ct = t;
  for (auto& v : cx) v *= 3;
  for (auto& v : ct) v *= 3;
  CHECK(mse(cx, ct) == doctest::Approx(9 * mse(x, t)));
}

TEST_CASE("support scores") {
  Vector truth(10, 0.0);
  truth[1] = truth[2] = truth[3] = 1.0;
  Vector est(10, 0.0);
  est[2] = est[3] = est[9] = 0.5;
  SupportScores s = support_scores(est, truth, 0.0);
  CHECK(s.recall == doctest::Approx(2.0 / 3));
  CHECK(s.precision == doctest::Approx(2.0 / 3));
  s = support_scores(truth, truth, 0.0);
  CHECK(s.recall == 1.0);
  CHECK(s.precision == 1.0);
  s = support_scores(Vector(10, 0.0), truth, 0.0);
  CHECK(s.recall == 0.0);
  CHECK(s.precision == 0.0);
  // entries at or below the tolerance do not count
  est[9] = 1e-9;
  s = support_scores(est, truth, 1e-6);
  CHECK(s.precision == 1.0);
  CHECK(default_zero_tol(Vector{-4, 1}) == doctest::Approx(4e-6));
}

TEST_CASE("top-k hit rate") {
  Vector truth(8, 0.0);
  truth[0] = 1.0;
  truth[5] = -0.5;
  CHECK(topk_hit_rate(truth, truth) == 1.0);
  Vector off(8, 0.0);
  off[1] = 3.0;
  off[2] = 2.0;
  off[0] = 0.1;
  CHECK(topk_hit_rate(off, truth) == 0.0);
  off[2] = 0.0;
  CHECK(topk_hit_rate(off, truth) == 0.5);  // ties at 0 go to the smaller index: {1, 0}
}

TEST_CASE("metric ranges") {
  std::mt19937_64 rng(13);
  for (int rep = 0; rep < 100; ++rep) {
    const Vector truth = gen_ground_truth(40, 5, 1, static_cast<std::uint64_t>(rep));
    const Vector x = random_vector(rng, 40);
    const SupportScores s = support_scores(x, truth, default_zero_tol(x));
    const double h = topk_hit_rate(x, truth);
    for (double v : {s.recall, s.precision, h}) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }
}

TEST_CASE("oracle OLS risk") {
  DenseMatrix Q(200, 130);
  for (std::size_t j = 0; j < 130; ++j) Q(j, j) = 1.0;
  std::vector<std::size_t> S(130);
  for (std::size_t j = 0; j < 130; ++j) S[j] = j;
  CHECK(oracle_ols_mse(Q, S, 0.1) == doctest::Approx(1.3));
  CHECK(oracle_ols_mse(Q, S, 0.0) == 0.0);
  CHECK_THROWS_AS(oracle_ols_mse(DenseMatrix(3, 3), std::vector<std::size_t>{0, 1}, 0.1), NotPositiveDefinite);
}

TEST_CASE("oracle OLS risk matches Monte Carlo") {
  ProblemSpec spec;
  spec.matrix_kind = MatrixKind::correlated_gaussian;
  spec.coherence_param = 0.0;
  spec.m = 360;
  spec.n = 512;
  spec.sparsity = 130;
  spec.normalize_columns = true;
  spec.seed = 1;
  const MeasurementProblem p = make_problem(spec);
  const std::vector<std::size_t> S = support_of(*p.ground_truth);
  const double sigma = 0.1;
  const double formula = oracle_ols_mse(p.A, S, sigma);

  // least squares on the support through the normal equations
  DenseMatrix AS(360, S.size());
  for (std::size_t i = 0; i < 360; ++i)
    for (std::size_t k = 0; k < S.size(); ++k) AS(i, k) = p.A(i, S[k]);
  const SpdFactor G = cholesky_spd(matmul(AS.transposed(), AS));
  std::mt19937_64 rng(2);
  std::normal_distribution<double> N(0.0, sigma);
  double total = 0.0;
  const int draws = 200;
  for (int d = 0; d < draws; ++d) {
    Vector e(360);
    for (auto& v : e) v = N(rng);
    const Vector err = spd_solve(G, matvec_transposed(AS, e));
    total += dot(err, err);
  }
  CHECK(std::abs(total / draws - formula) <= 0.1 * formula);
}

TEST_CASE("trial scoring") {
  TrialRecord r;
  Vector truth(5, 0.0);
  truth[2] = 1.0;
  Vector x = truth;
  x[2] = 1.0 + 5e-4;
  score_trial(r, x, truth);
  CHECK(r.success);
  CHECK(r.success == (r.rel_err < kSuccessThreshold));
  x[2] = 1.0 + 2e-3;
  score_trial(r, x, truth);
  CHECK_FALSE(r.success);
  CHECK(r.topk_hit == 1.0);
}
