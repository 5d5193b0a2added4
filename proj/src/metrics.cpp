#include "sortedl1l2/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sortedl1l2/errors.hpp"

namespace sortedl1l2 {

double relative_error(std::span<const double> x, std::span<const double> truth) {
  const double nt = norm2(truth);
  if (nt == 0.0) throw ContractViolation("relative_error: ground truth is zero");
  return norm2(subtract(x, truth)) / nt;
}

double mse(std::span<const double> x, std::span<const double> truth) {
  if (x.size() != truth.size()) throw ContractViolation("mse: length mismatch");
  if (x.empty()) return 0.0;
  const Vector d = subtract(x, truth);
  return dot(d, d) / static_cast<double>(x.size());
}

std::vector<std::size_t> support_of(std::span<const double> x) {
  std::vector<std::size_t> s;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] != 0.0) s.push_back(i);
  return s;
}

double default_zero_tol(std::span<const double> x) { return 1e-6 * norm_inf(x); }

SupportScores support_scores(std::span<const double> x, std::span<const double> truth, double zero_tol) {
  if (x.size() != truth.size()) throw ContractViolation("support_scores: length mismatch");
  std::size_t n_true = 0;
  std::size_t n_est = 0;
  std::size_t hit = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const bool t = truth[i] != 0.0;
    const bool e = std::abs(x[i]) > zero_tol;
    n_true += t;
    n_est += e;
    hit += t && e;
  }
  if (n_true == 0) throw ContractViolation("support_scores: ground truth has no support");
  SupportScores s;
  s.recall = static_cast<double>(hit) / static_cast<double>(n_true);
  s.precision = n_est ? static_cast<double>(hit) / static_cast<double>(n_est) : 0.0;
  return s;
}

double topk_hit_rate(std::span<const double> x, std::span<const double> truth) {
  if (x.size() != truth.size()) throw ContractViolation("topk_hit_rate: length mismatch");
  const std::size_t k = support_of(truth).size();
  if (k == 0) throw ContractViolation("topk_hit_rate: ground truth has no support");
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                    [&](std::size_t a, std::size_t b) {
                      const double fa = std::abs(x[a]);
                      const double fb = std::abs(x[b]);
                      return fa > fb || (fa == fb && a < b);
                    });
  std::size_t hit = 0;
  for (std::size_t i = 0; i < k; ++i) hit += truth[order[i]] != 0.0;
  return static_cast<double>(hit) / static_cast<double>(k);
}

double oracle_ols_mse(const DenseMatrix& A, std::span<const std::size_t> support, double sigma) {
  const std::size_t s = support.size();
  if (s == 0) throw ContractViolation("oracle_ols_mse: empty support");
  DenseMatrix G(s, s);
  for (std::size_t a = 0; a < s; ++a) {
    for (std::size_t b = 0; b <= a; ++b) {
      double g = 0.0;
      for (std::size_t i = 0; i < A.rows(); ++i) g += A(i, support[a]) * A(i, support[b]);
      G(a, b) = g;
      G(b, a) = g;
    }
  }
  const SpdFactor F = cholesky_spd(G);
  // trace(G⁻¹) = ‖L⁻¹‖_F²
  double trace = 0.0;
  Vector col(s);
  for (std::size_t j = 0; j < s; ++j) {
    std::fill(col.begin(), col.end(), 0.0);
    col[j] = 1.0;
    for (std::size_t i = j; i < s; ++i) {
      double v = col[i];
      for (std::size_t k = j; k < i; ++k) v -= F.lower(i, k) * col[k];
      col[i] = v / F.lower(i, i);
      trace += col[i] * col[i];
    }
  }
  return sigma * sigma * trace;
}

void score_trial(TrialRecord& record, std::span<const double> x, std::span<const double> truth) {
  record.rel_err = relative_error(x, truth);
  record.mse = mse(x, truth);
  record.success = record.rel_err < kSuccessThreshold;
  const SupportScores s = support_scores(x, truth, default_zero_tol(x));
  record.recall = s.recall;
  record.precision = s.precision;
  record.topk_hit = topk_hit_rate(x, truth);
}

}  // namespace sortedl1l2
