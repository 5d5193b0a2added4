#include "sortedl1l2/problems.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <random>

#include "sortedl1l2/errors.hpp"

namespace sortedl1l2 {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

constexpr std::size_t kMaxSupportRetries = 100000;

}  // namespace

std::string_view to_string(MatrixKind kind) {
  switch (kind) {
    case MatrixKind::oversampled_dct:
      return "oversampled_dct";
    case MatrixKind::correlated_gaussian:
      return "correlated_gaussian";
  }
  return "unknown";
}

MatrixKind matrix_kind_from_string(std::string_view name) {
  if (name == "oversampled_dct" || name == "dct") return MatrixKind::oversampled_dct;
  if (name == "correlated_gaussian" || name == "gaussian") return MatrixKind::correlated_gaussian;
  throw ContractViolation("unknown matrix kind: " + std::string(name));
}

void ProblemSpec::validate() const {
  if (m == 0 || n == 0) throw ContractViolation("problem dimensions must be positive");
  if (sparsity == 0 || sparsity > n) throw ContractViolation("sparsity must lie in [1, n]");
  if (min_separation == 0) throw ContractViolation("min_separation must be positive");
  if ((sparsity - 1) * min_separation >= n)
    throw ContractViolation("no support with the requested separation fits in n");
  if (!(noise_sigma >= 0.0)) throw ContractViolation("noise_sigma must be nonnegative");
  if (matrix_kind == MatrixKind::oversampled_dct) {
    if (!(coherence_param > 0.0)) throw ContractViolation("DCT coherence F must be positive");
  } else if (!(coherence_param >= 0.0 && coherence_param < 1.0)) {
    throw ContractViolation("Gaussian correlation R must lie in [0, 1)");
  }
}

std::string ProblemSpec::canonical() const {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%s;m=%zu;n=%zu;c=%.17g;s=%zu;L=%zu;sigma=%.17g;norm=%d;seed=%llu",
                std::string(to_string(matrix_kind)).c_str(), m, n, coherence_param, sparsity,
                min_separation, noise_sigma, normalize_columns ? 1 : 0,
                static_cast<unsigned long long>(seed));
  return buf;
}

std::string ProblemSpec::digest() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(canonical())));
  return buf;
}

std::uint64_t derive_seed(std::uint64_t base, std::string_view tag, std::uint64_t index) {
  return splitmix64(splitmix64(base ^ fnv1a64(tag)) + index);
}

DenseMatrix gen_oversampled_dct_from_h(std::size_t n, double F, std::span<const double> h) {
  const std::size_t m = h.size();
  if (m == 0 || n == 0 || !(F > 0.0)) throw ContractViolation("gen_oversampled_dct: bad sizes");
  DenseMatrix A(m, n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(m));
  const double w = 2.0 * std::numbers::pi / F;
  for (std::size_t i = 0; i < m; ++i) {
    auto row = A.row(i);
    for (std::size_t j = 0; j < n; ++j) row[j] = scale * std::cos(w * h[i] * static_cast<double>(j + 1));
  }
  return A;
}

DenseMatrix gen_oversampled_dct(std::size_t m, std::size_t n, double F, std::uint64_t seed) {
  if (m == 0) throw ContractViolation("gen_oversampled_dct: m must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Vector h(m);
  for (auto& v : h) v = unif(rng);
  return gen_oversampled_dct_from_h(n, F, h);
}

DenseMatrix gen_correlated_gaussian(std::size_t m, std::size_t n, double R, std::uint64_t seed,
                                    bool normalize_columns) {
  if (!(R >= 0.0 && R < 1.0)) throw ContractViolation("gen_correlated_gaussian: R must lie in [0,1)");
  if (m == 0 || n == 0) throw ContractViolation("gen_correlated_gaussian: bad sizes");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double a = std::sqrt(1.0 - R);
  const double c = std::sqrt(R);
  DenseMatrix A(m, n);
  for (std::size_t i = 0; i < m; ++i) {
    const double common = normal(rng);
    auto row = A.row(i);
    for (std::size_t j = 0; j < n; ++j) row[j] = a * normal(rng) + c * common;
  }
  if (normalize_columns) {
    for (std::size_t j = 0; j < n; ++j) {
      double mean = 0.0;
      for (std::size_t i = 0; i < m; ++i) mean += A(i, j);
      mean /= static_cast<double>(m);
      double ss = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        A(i, j) -= mean;
        ss += A(i, j) * A(i, j);
      }
      const double inv = 1.0 / std::sqrt(ss);
      for (std::size_t i = 0; i < m; ++i) A(i, j) *= inv;
    }
  }
  return A;
}

Vector gen_ground_truth(std::size_t n, std::size_t s, std::size_t L, std::uint64_t seed) {
  if (s == 0 || s > n || L == 0 || (s - 1) * L >= n)
    throw ContractViolation("gen_ground_truth: infeasible (s, L, n) combination");
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> pool(n);
  std::vector<std::size_t> support;
  bool found = false;
  for (std::size_t attempt = 0; attempt < kMaxSupportRetries && !found; ++attempt) {
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    // partial Fisher-Yates: first s entries are a uniform s-subset
    for (std::size_t i = 0; i < s; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, n - 1);
      std::swap(pool[i], pool[pick(rng)]);
    }
    support.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(s));
    std::sort(support.begin(), support.end());
    found = true;
    for (std::size_t i = 1; i < s; ++i) {
      if (support[i] - support[i - 1] < L) {
        found = false;
        break;
      }
    }
  }
  if (!found) throw ContractViolation("gen_ground_truth: separation rejection sampling exhausted");

  std::normal_distribution<double> normal(0.0, 1.0);
  Vector x(n, 0.0);
  for (std::size_t idx : support) {
    double v = 0.0;
    while (v == 0.0) v = normal(rng);
    x[idx] = v;
  }
  const double peak = norm_inf(x);
  for (auto& v : x) v /= peak;
  return x;
}

MeasurementProblem make_problem(const ProblemSpec& spec) {
  spec.validate();
  const std::uint64_t matrix_seed = derive_seed(spec.seed, "matrix");
  const std::uint64_t signal_seed = derive_seed(spec.seed, "signal");
  const std::uint64_t noise_seed = derive_seed(spec.seed, "noise");

  MeasurementProblem p;
  p.spec = spec;
  p.A = spec.matrix_kind == MatrixKind::oversampled_dct
            ? gen_oversampled_dct(spec.m, spec.n, spec.coherence_param, matrix_seed)
            : gen_correlated_gaussian(spec.m, spec.n, spec.coherence_param, matrix_seed,
                                      spec.normalize_columns);
  Vector x = gen_ground_truth(spec.n, spec.sparsity, spec.min_separation, signal_seed);
  p.b = matvec(p.A, x);
  if (spec.noise_sigma > 0.0) {
    std::mt19937_64 rng(noise_seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (auto& v : p.b) v += spec.noise_sigma * normal(rng);
  }
  p.ground_truth = std::move(x);
  return p;
}

}  // namespace sortedl1l2
