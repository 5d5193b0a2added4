#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace sortedl1l2 {

using Vector = std::vector<double>;

/// Row-major dense real matrix. Entries are finite by construction;
/// the constructors reject NaN/Inf.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols);
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries);
  DenseMatrix(std::initializer_list<std::initializer_list<double>> rows);

  static DenseMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }
  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }

  std::span<const double> row(std::size_t i) const noexcept {
    return {data_.data() + i * cols_, cols_};
  }
  std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }

  std::span<const double> data() const noexcept { return data_; }

  Vector column(std::size_t j) const;
  DenseMatrix transposed() const;

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

double dot(std::span<const double> a, std::span<const double> b);
double norm1(std::span<const double> v);
double norm2(std::span<const double> v);
double norm_inf(std::span<const double> v);
/// y += a * x
void axpy(double a, std::span<const double> x, std::span<double> y);
Vector subtract(std::span<const double> a, std::span<const double> b);

/// M·v
Vector matvec(const DenseMatrix& M, std::span<const double> v);
/// Mᵀ·v
Vector matvec_transposed(const DenseMatrix& M, std::span<const double> v);
DenseMatrix matmul(const DenseMatrix& A, const DenseMatrix& B);
/// A·Aᵀ (rows × rows), optionally plus shift·I.
DenseMatrix outer_gram(const DenseMatrix& A, double shift = 0.0);

/// Lower-triangular Cholesky factor L with L·Lᵀ equal to the factored matrix.
class SpdFactor {
 public:
  std::size_t dim() const noexcept { return dim_; }
  double lower(std::size_t i, std::size_t j) const noexcept { return l_[i * dim_ + j]; }
  /// Dense copy of L.
  DenseMatrix lower_matrix() const;

  friend SpdFactor cholesky_spd(const DenseMatrix& M);

 private:
  std::size_t dim_ = 0;
  std::vector<double> l_;
};

/// Throws ContractViolation if M is not square or asymmetric beyond 1e-12
/// (relative to the largest entry), NotPositiveDefinite on a non-positive pivot.
SpdFactor cholesky_spd(const DenseMatrix& M);

/// Solves (L·Lᵀ)x = rhs.
Vector spd_solve(const SpdFactor& F, std::span<const double> rhs);

/// Euclidean projection of z onto {x : Ax = b}, given the factor of A·Aᵀ:
/// z − Aᵀ(AAᵀ)⁻¹(Az − b).
Vector affine_project(const DenseMatrix& A, const SpdFactor& F_AAt, std::span<const double> b,
                      std::span<const double> z);

/// (AᵀA + δI)⁻¹·rhs through the Woodbury identity, given the factor of
/// (δI + AAᵀ). Cost is O(mn) per call.
Vector ridge_apply(const DenseMatrix& A, const SpdFactor& F_reg, double delta,
                   std::span<const double> rhs);

}  // namespace sortedl1l2
