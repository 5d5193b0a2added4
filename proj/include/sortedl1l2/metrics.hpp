#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sortedl1l2/linalg.hpp"

namespace sortedl1l2 {

/// Trials with relative error strictly below this count as recovered.
inline constexpr double kSuccessThreshold = 1e-3;

/// ‖x − x̄‖₂ / ‖x̄‖₂; x̄ must be nonzero.
double relative_error(std::span<const double> x, std::span<const double> truth);

/// ‖x − x̄‖₂² / n.
double mse(std::span<const double> x, std::span<const double> truth);

struct SupportScores {
  double recall = 0.0;
  double precision = 0.0;
};

/// Estimated support {i : |xᵢ| > zero_tol} scored against supp(x̄).
SupportScores support_scores(std::span<const double> x, std::span<const double> truth, double zero_tol);
/// 1e-6·max|xᵢ|.
double default_zero_tol(std::span<const double> x);

/// Fraction of supp(x̄) among the ‖x̄‖₀ largest |xᵢ| (ties to the smaller index).
double topk_hit_rate(std::span<const double> x, std::span<const double> truth);

/// σ²·trace((A_Sᵀ A_S)⁻¹); throws NotPositiveDefinite when A_S is rank deficient.
double oracle_ols_mse(const DenseMatrix& A, std::span<const std::size_t> support, double sigma);

std::vector<std::size_t> support_of(std::span<const double> x);

struct TrialRecord {
  std::string solver;
  std::string spec_digest;
  std::string matrix_kind;
  double coherence_param = 0.0;
  std::size_t m = 0;
  std::size_t n = 0;
  std::size_t sparsity = 0;
  std::uint64_t seed = 0;
  double rel_err = 0.0;
  double mse = 0.0;
  bool success = false;
  double recall = 0.0;
  double precision = 0.0;
  double topk_hit = 0.0;
  std::size_t outer_iters = 0;
  double wall_time_ms = 0.0;
  /// Per-entry oracle OLS MSE (σ²·tr/n) for noisy trials.
  std::optional<double> oracle_mse;
  /// Non-empty when the solver threw; metrics then describe x = 0.
  std::string error;
};

/// Fills every metric of `record` from the recovered and true signals;
/// success is set exactly when rel_err < kSuccessThreshold.
void score_trial(TrialRecord& record, std::span<const double> x, std::span<const double> truth);

}  // namespace sortedl1l2
