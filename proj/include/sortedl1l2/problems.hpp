#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "sortedl1l2/linalg.hpp"

namespace sortedl1l2 {

enum class MatrixKind { oversampled_dct, correlated_gaussian };

std::string_view to_string(MatrixKind kind);
/// Throws ContractViolation on an unknown name.
MatrixKind matrix_kind_from_string(std::string_view name);

struct ProblemSpec {
  MatrixKind matrix_kind = MatrixKind::oversampled_dct;
  std::size_t m = 64;
  std::size_t n = 1024;
  /// F for the oversampled DCT, R for the correlated Gaussian.
  double coherence_param = 5.0;
  std::size_t sparsity = 8;
  std::size_t min_separation = 1;
  double noise_sigma = 0.0;
  bool normalize_columns = false;
  std::uint64_t seed = 0;

  /// Throws ContractViolation when the fields are inconsistent.
  void validate() const;
  /// Canonical text form; stable across runs, used for digests.
  std::string canonical() const;
  /// 16 hex digits (FNV-1a of canonical()).
  std::string digest() const;

  friend bool operator==(const ProblemSpec&, const ProblemSpec&) = default;
};

struct MeasurementProblem {
  DenseMatrix A;
  Vector b;
  std::optional<Vector> ground_truth;
  ProblemSpec spec;
};

/// Child seed from (base, purpose tag, index) via two rounds of splitmix64:
/// splitmix64(splitmix64(base ^ fnv1a64(tag)) + index).
std::uint64_t derive_seed(std::uint64_t base, std::string_view tag, std::uint64_t index = 0);

/// Column j (1-based) is (1/√m)·cos(2π·h·j/F) with h ~ U[0,1]^m drawn from seed.
DenseMatrix gen_oversampled_dct(std::size_t m, std::size_t n, double F, std::uint64_t seed);
/// Same construction with an explicit frequency vector h (length m).
DenseMatrix gen_oversampled_dct_from_h(std::size_t n, double F, std::span<const double> h);

/// Rows i.i.d. N(0, (1−R)I + R·11ᵀ); optional column centering and unit norm.
DenseMatrix gen_correlated_gaussian(std::size_t m, std::size_t n, double R, std::uint64_t seed,
                                    bool normalize_columns);

/// s-sparse vector with support separated by at least L, standard normal
/// values, scaled so the largest magnitude is exactly 1.
Vector gen_ground_truth(std::size_t n, std::size_t s, std::size_t L, std::uint64_t seed);

MeasurementProblem make_problem(const ProblemSpec& spec);

}  // namespace sortedl1l2
