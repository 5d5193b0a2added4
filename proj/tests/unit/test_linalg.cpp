#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "sortedl1l2/errors.hpp"
#include "sortedl1l2/linalg.hpp"
#include "test_support.hpp"

using namespace sortedl1l2;
using namespace testing_support;

TEST_CASE("dense matrix construction") {
  CHECK_THROWS_AS(DenseMatrix(2, 2, {1.0, 2.0, 3.0}), ContractViolation);
  CHECK_THROWS_AS(DenseMatrix(1, 1, {std::numeric_limits<double>::quiet_NaN()}), ContractViolation);
  CHECK_THROWS_AS(DenseMatrix(1, 1, {std::numeric_limits<double>::infinity()}), ContractViolation);
  const DenseMatrix M{{1, 2, 3}, {4, 5, 6}};
  CHECK(M.rows() == 2);
  CHECK(M.cols() == 3);
  CHECK(M(1, 2) == 6.0);
  CHECK(M.column(1) == Vector{2, 5});
  CHECK(M.transposed() == DenseMatrix{{1, 4}, {2, 5}, {3, 6}});
}

TEST_CASE("matvec") {
  CHECK(matvec(DenseMatrix::identity(3), Vector{1, 2, 3}) == Vector{1, 2, 3});
  CHECK(matvec(DenseMatrix{{1, 2}, {3, 4}}, Vector{1, 1}) == Vector{3, 7});
  CHECK_THROWS_AS(matvec(DenseMatrix{{1, 2}}, Vector{1}), ContractViolation);

  std::mt19937_64 rng(11);
  const DenseMatrix M = random_matrix(rng, 5, 7);
  const Vector v = random_vector(rng, 7);
  const Vector got = matvec(M, v);
  for (std::size_t i = 0; i < 5; ++i) {
    double ref = 0.0;
    for (std::size_t j = 0; j < 7; ++j) ref += M(i, j) * v[j];
    CHECK(std::abs(got[i] - ref) <= 1e-14 * std::max(1.0, std::abs(ref)));
  }
  const Vector u = random_vector(rng, 5);
  const Vector gt = matvec_transposed(M, u);
  const Vector ref = matvec(M.transposed(), u);
  CHECK(max_abs_diff(gt, ref) <= 1e-13);
}

TEST_CASE("vector norms") {
  const Vector v{3, -4, 0};
  CHECK(norm1(v) == 7.0);
  CHECK(norm2(v) == doctest::Approx(5.0));
  CHECK(norm_inf(v) == 4.0);
  CHECK(dot(v, Vector{1, 1, 1}) == -1.0);
}

TEST_CASE("cholesky closed forms") {
  const SpdFactor I = cholesky_spd(DenseMatrix::identity(4));
  CHECK(I.lower_matrix() == DenseMatrix::identity(4));

  const SpdFactor F = cholesky_spd(DenseMatrix{{4, 2}, {2, 3}});
  CHECK(F.lower(0, 0) == doctest::Approx(2.0));
  CHECK(F.lower(1, 0) == doctest::Approx(1.0));
  CHECK(F.lower(1, 1) == doctest::Approx(std::sqrt(2.0)));
  CHECK(F.lower(0, 1) == 0.0);

  const Vector x = spd_solve(F, Vector{6, 5});
  CHECK(x[0] == doctest::Approx(1.0));
  CHECK(x[1] == doctest::Approx(1.0));
  CHECK(spd_solve(I, Vector{5, 6, 0, 0}) == Vector{5, 6, 0, 0});
}

TEST_CASE("cholesky rejects bad input") {
  CHECK_THROWS_AS(cholesky_spd(DenseMatrix{{1, 2}, {0, 1}}), ContractViolation);
  CHECK_THROWS_AS(cholesky_spd(DenseMatrix{{1, 2, 3}}), ContractViolation);
  try {
    cholesky_spd(DenseMatrix{{1, 2}, {2, 1}});
    FAIL("expected NotPositiveDefinite");
  } catch (const NotPositiveDefinite& e) {
    CHECK(e.pivot() == 1);
  }
}

TEST_CASE("cholesky reconstruction of A A^T + I") {
  std::mt19937_64 rng(3);
  const DenseMatrix A = random_matrix(rng, 8, 20);
  const DenseMatrix M = outer_gram(A, 1.0);
  const DenseMatrix L = cholesky_spd(M).lower_matrix();
  const DenseMatrix R = matmul(L, L.transposed());
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = 0; j < 8; ++j) {
      num += (R(i, j) - M(i, j)) * (R(i, j) - M(i, j));
      den += M(i, j) * M(i, j);
    }
  CHECK(std::sqrt(num / den) <= 1e-10);
  for (std::size_t i = 0; i < 8; ++i) CHECK(L(i, i) > 0.0);
}

TEST_CASE("spd round trip on random systems") {
  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 10; ++rep) {
    const DenseMatrix A = random_matrix(rng, 12, 30);
    const DenseMatrix M = outer_gram(A, 0.5);
    const Vector rhs = random_vector(rng, 12);
    const Vector x = spd_solve(cholesky_spd(M), rhs);
    const Vector res = subtract(matvec(M, x), rhs);
    CHECK(norm2(res) / norm2(rhs) <= 1e-10);
  }
}

TEST_CASE("affine projection") {
  const DenseMatrix A{{1, 1}};
  const SpdFactor F = cholesky_spd(outer_gram(A));
  const Vector p = affine_project(A, F, Vector{2}, Vector{0, 0});
  CHECK(p[0] == doctest::Approx(1.0));
  CHECK(p[1] == doctest::Approx(1.0));

  const Vector feasible{0.5, 1.5};
  CHECK(max_abs_diff(affine_project(A, F, Vector{2}, feasible), feasible) <= 1e-12);

  // KKT oracle: [I Aᵀ; A 0][x; μ] = [z; b]
  std::mt19937_64 rng(8);
  const DenseMatrix B = random_matrix(rng, 4, 10);
  const Vector b = random_vector(rng, 4);
  const Vector z = random_vector(rng, 10);
  DenseMatrix K(14, 14);
  Vector rhs(14);
  for (std::size_t i = 0; i < 10; ++i) {
    K(i, i) = 1.0;
    rhs[i] = z[i];
  }
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t j = 0; j < 10; ++j) {
      K(10 + r, j) = B(r, j);
      K(j, 10 + r) = B(r, j);
    }
    rhs[10 + r] = b[r];
  }
  const Vector kkt = gauss_solve(K, rhs);
  const SpdFactor FB = cholesky_spd(outer_gram(B));
  const Vector proj = affine_project(B, FB, b, z);
  for (std::size_t i = 0; i < 10; ++i) CHECK(std::abs(proj[i] - kkt[i]) <= 1e-10);
  // idempotence
  CHECK(max_abs_diff(affine_project(B, FB, b, proj), proj) <= 1e-10);
}

TEST_CASE("ridge apply via the small factor") {
  const DenseMatrix Z(3, 5);
  const SpdFactor FZ = cholesky_spd(outer_gram(Z, 0.8));
  const Vector rhs{1, 2, 3, 4, 5};
  const Vector out = ridge_apply(Z, FZ, 0.8, rhs);
  for (std::size_t i = 0; i < 5; ++i) CHECK(out[i] == doctest::Approx(rhs[i] / 0.8));
  CHECK_THROWS_AS(ridge_apply(Z, FZ, 0.0, rhs), ContractViolation);

  std::mt19937_64 rng(21);
  for (double delta : {0.1, 0.8, 10.0}) {
    const DenseMatrix A = random_matrix(rng, 3, 6);
    const SpdFactor F = cholesky_spd(outer_gram(A, delta));
    const Vector r = random_vector(rng, 6);
    const Vector x = ridge_apply(A, F, delta, r);
    // (AᵀA + δI)x − r
    Vector lhs = matvec_transposed(A, matvec(A, x));
    axpy(delta, x, lhs);
    CHECK(norm2(subtract(lhs, r)) <= 1e-9 * std::max(1.0, norm2(r)));
  }

  // direct n×n oracle on 10×30
  const DenseMatrix A = random_matrix(rng, 10, 30);
  const Vector r = random_vector(rng, 30);
  DenseMatrix N = matmul(A.transposed(), A);
  for (std::size_t i = 0; i < 30; ++i) N(i, i) += 0.8;
  const Vector direct = gauss_solve(N, r);
  const Vector wood = ridge_apply(A, cholesky_spd(outer_gram(A, 0.8)), 0.8, r);
  CHECK(max_abs_diff(direct, wood) <= 1e-10);
}
