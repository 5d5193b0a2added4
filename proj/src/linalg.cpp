#include "sortedl1l2/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sortedl1l2/errors.hpp"

namespace sortedl1l2 {

namespace {

void require_finite(std::span<const double> entries) {
  for (double v : entries) {
    if (!std::isfinite(v)) throw ContractViolation("matrix entries must be finite");
  }
}

void require_size(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw ContractViolation(std::string("dimension mismatch: ") + what + " has length " +
                            std::to_string(got) + ", expected " + std::to_string(want));
  }
}

}  // namespace

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  require_size(data_.size(), rows * cols, "entries");
  require_finite(data_);
}

DenseMatrix::DenseMatrix(std::initializer_list<std::initializer_list<double>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    require_size(r.size(), cols_, "row");
    data_.insert(data_.end(), r.begin(), r.end());
  }
  require_finite(data_);
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix I(n, n);
  for (std::size_t i = 0; i < n; ++i) I(i, i) = 1.0;
  return I;
}

Vector DenseMatrix::column(std::size_t j) const {
  Vector c(rows_);
  for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
  return c;
}

DenseMatrix DenseMatrix::transposed() const {
  DenseMatrix T(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) T(j, i) = (*this)(i, j);
  return T;
}

double dot(std::span<const double> a, std::span<const double> b) {
  require_size(b.size(), a.size(), "dot operand");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm1(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += std::abs(x);
  return s;
}

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double norm_inf(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s = std::max(s, std::abs(x));
  return s;
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  require_size(y.size(), x.size(), "axpy target");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

Vector subtract(std::span<const double> a, std::span<const double> b) {
  require_size(b.size(), a.size(), "subtrahend");
  Vector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

Vector matvec(const DenseMatrix& M, std::span<const double> v) {
  require_size(v.size(), M.cols(), "matvec operand");
  Vector out(M.rows());
  for (std::size_t i = 0; i < M.rows(); ++i) {
    const auto r = M.row(i);
    double s = 0.0;
    for (std::size_t j = 0; j < r.size(); ++j) s += r[j] * v[j];
    out[i] = s;
  }
  return out;
}

Vector matvec_transposed(const DenseMatrix& M, std::span<const double> v) {
  require_size(v.size(), M.rows(), "transposed matvec operand");
  Vector out(M.cols(), 0.0);
  for (std::size_t i = 0; i < M.rows(); ++i) {
    const double vi = v[i];
    if (vi == 0.0) continue;
    const auto r = M.row(i);
    for (std::size_t j = 0; j < r.size(); ++j) out[j] += vi * r[j];
  }
  return out;
}

DenseMatrix matmul(const DenseMatrix& A, const DenseMatrix& B) {
  require_size(B.rows(), A.cols(), "matmul right operand rows");
  DenseMatrix C(A.rows(), B.cols());
  for (std::size_t i = 0; i < A.rows(); ++i) {
    auto ci = C.row(i);
    for (std::size_t k = 0; k < A.cols(); ++k) {
      const double a = A(i, k);
      if (a == 0.0) continue;
      const auto bk = B.row(k);
      for (std::size_t j = 0; j < B.cols(); ++j) ci[j] += a * bk[j];
    }
  }
  return C;
}

DenseMatrix outer_gram(const DenseMatrix& A, double shift) {
  const std::size_t m = A.rows();
  DenseMatrix G(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const double g = dot(A.row(i), A.row(j));
      G(i, j) = g;
      G(j, i) = g;
    }
    G(i, i) += shift;
  }
  return G;
}

DenseMatrix SpdFactor::lower_matrix() const {
  return DenseMatrix(dim_, dim_, l_);
}

SpdFactor cholesky_spd(const DenseMatrix& M) {
  const std::size_t n = M.rows();
  if (M.cols() != n) throw ContractViolation("cholesky_spd: matrix is not square");
  if (n == 0) throw ContractViolation("cholesky_spd: empty matrix");

  const double scale = std::max(1.0, norm_inf(M.data()));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (std::abs(M(i, j) - M(j, i)) > 1e-12 * scale)
        throw ContractViolation("cholesky_spd: matrix is not symmetric");

  SpdFactor F;
  F.dim_ = n;
  F.l_.assign(n * n, 0.0);
  auto L = [&](std::size_t i, std::size_t j) -> double& { return F.l_[i * n + j]; };
  for (std::size_t j = 0; j < n; ++j) {
    double d = M(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= L(j, k) * L(j, k);
    if (!(d > 0.0)) throw NotPositiveDefinite(j);
    const double ljj = std::sqrt(d);
    L(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = M(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= L(i, k) * L(j, k);
      L(i, j) = s / ljj;
    }
  }
  return F;
}

Vector spd_solve(const SpdFactor& F, std::span<const double> rhs) {
  const std::size_t n = F.dim();
  require_size(rhs.size(), n, "spd_solve rhs");
  Vector x(rhs.begin(), rhs.end());
  // L y = rhs
  for (std::size_t i = 0; i < n; ++i) {
    double s = x[i];
    for (std::size_t k = 0; k < i; ++k) s -= F.lower(i, k) * x[k];
    x[i] = s / F.lower(i, i);
  }
  // Lᵀ x = y
  for (std::size_t ii = n; ii-- > 0;) {
    double s = x[ii];
    for (std::size_t k = ii + 1; k < n; ++k) s -= F.lower(k, ii) * x[k];
    x[ii] = s / F.lower(ii, ii);
  }
  return x;
}

Vector affine_project(const DenseMatrix& A, const SpdFactor& F_AAt, std::span<const double> b,
                      std::span<const double> z) {
  require_size(b.size(), A.rows(), "affine_project b");
  require_size(F_AAt.dim(), A.rows(), "affine_project factor");
  Vector r = matvec(A, z);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
  const Vector mu = spd_solve(F_AAt, r);
  const Vector corr = matvec_transposed(A, mu);
  Vector out(z.begin(), z.end());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] -= corr[j];
  return out;
}

Vector ridge_apply(const DenseMatrix& A, const SpdFactor& F_reg, double delta,
                   std::span<const double> rhs) {
  if (!(delta > 0.0)) throw ContractViolation("ridge_apply: delta must be positive");
  require_size(rhs.size(), A.cols(), "ridge_apply rhs");
  require_size(F_reg.dim(), A.rows(), "ridge_apply factor");
  const Vector Ar = matvec(A, rhs);
  const Vector u = spd_solve(F_reg, Ar);
  const Vector Atu = matvec_transposed(A, u);
  Vector x(rhs.size());
  const double inv = 1.0 / delta;
  for (std::size_t j = 0; j < x.size(); ++j) x[j] = inv * (rhs[j] - Atu[j]);
  return x;
}

}  // namespace sortedl1l2
