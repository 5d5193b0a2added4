#include "sortedl1l2/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sortedl1l2/errors.hpp"

namespace sortedl1l2 {

void BoundedLp::validate() const {
  const std::size_t N = c.size();
  const std::size_t M = b_eq.size();
  if (A_eq.rows() != M || A_eq.cols() != N) throw ContractViolation("BoundedLp: A_eq shape mismatch");
  if (lower.size() != N || upper.size() != N) throw ContractViolation("BoundedLp: bound length mismatch");
  if (M > N) throw ContractViolation("BoundedLp: more rows than variables");
  for (std::size_t j = 0; j < N; ++j) {
    if (!std::isfinite(lower[j]) || !std::isfinite(upper[j]) || lower[j] > upper[j])
      throw ContractViolation("BoundedLp: bounds must be finite with lower <= upper");
    if (!std::isfinite(c[j])) throw ContractViolation("BoundedLp: cost must be finite");
  }
  for (double v : b_eq)
    if (!std::isfinite(v)) throw ContractViolation("BoundedLp: b_eq must be finite");
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Variables 0..N-1 are structural, N..N+M-1 are artificials with column
// art_sign[i]·e_i.
class BoundedSimplex {
 public:
  BoundedSimplex(const BoundedLp& lp, const LpOptions& opt)
      : lp_(lp),
        opt_(opt),
        M_(lp.num_rows()),
        N_(lp.num_vars()),
        total_(N_ + M_),
        lo_(total_, 0.0),
        up_(total_, 0.0),
        cost_(total_, 0.0),
        x_(total_, 0.0),
        at_upper_(total_, false),
        pos_(total_, kNotBasic),
        head_(M_, 0),
        art_sign_(M_, 1.0),
        binv_(M_ * M_, 0.0),
        pivot_cap_(std::max<std::size_t>(10 * N_ * std::max<std::size_t>(M_, 1), 1000)) {
    for (std::size_t j = 0; j < N_; ++j) {
      lo_[j] = lp.lower[j];
      up_[j] = lp.upper[j];
    }
    bscale_ = std::max(1.0, norm_inf(lp.b_eq));
  }

  LpSolution solve(const LpBasis* warm) {
    bool phase2_ready = warm != nullptr && try_warm_start(*warm);
    if (!phase2_ready) {
      cold_start();
      set_phase1_costs();
      iterate();
      double infeas = 0.0;
      for (std::size_t i = 0; i < M_; ++i) infeas += x_[N_ + i];
      if (infeas > opt_.feasibility_tol * bscale_) return finish(LpStatus::infeasible);
    }
    // Phase 2: artificials pinned to zero.
    for (std::size_t i = 0; i < M_; ++i) {
      up_[N_ + i] = 0.0;
      if (pos_[N_ + i] == kNotBasic) {
        x_[N_ + i] = 0.0;
        at_upper_[N_ + i] = false;
      }
    }
    set_phase2_costs();
    iterate();
    return finish(LpStatus::optimal);
  }

 private:
  static constexpr std::size_t kNotBasic = static_cast<std::size_t>(-1);

  // Value of column j at row i.
  double coef(std::size_t i, std::size_t j) const {
    if (j < N_) return lp_.A_eq(i, j);
    return (j - N_ == i) ? art_sign_[i] : 0.0;
  }

  double& binv(std::size_t r, std::size_t i) { return binv_[r * M_ + i]; }

  void cold_start() {
    for (std::size_t j = 0; j < N_; ++j) {
      x_[j] = lo_[j];
      at_upper_[j] = false;
      pos_[j] = kNotBasic;
    }
    Vector resid(lp_.b_eq);
    for (std::size_t i = 0; i < M_; ++i) {
      const auto row = lp_.A_eq.row(i);
      double s = 0.0;
      for (std::size_t j = 0; j < N_; ++j) s += row[j] * x_[j];
      resid[i] -= s;
    }
    for (std::size_t i = 0; i < M_; ++i) {
      art_sign_[i] = resid[i] >= 0.0 ? 1.0 : -1.0;
      lo_[N_ + i] = 0.0;
      up_[N_ + i] = kInf;
      x_[N_ + i] = std::abs(resid[i]);
      head_[i] = N_ + i;
      pos_[N_ + i] = i;
    }
    std::fill(binv_.begin(), binv_.end(), 0.0);
    for (std::size_t i = 0; i < M_; ++i) binv(i, i) = art_sign_[i];
    since_refactor_ = 0;
  }

  bool try_warm_start(const LpBasis& warm) {
    if (warm.basic.size() != M_ || warm.at_upper.size() != N_) return false;
    std::vector<bool> seen(N_, false);
    for (std::size_t j : warm.basic) {
      if (j >= N_ || seen[j]) return false;
      seen[j] = true;
    }
    std::fill(pos_.begin(), pos_.end(), kNotBasic);
    for (std::size_t j = 0; j < N_; ++j) {
      at_upper_[j] = !seen[j] && warm.at_upper[j];
      x_[j] = at_upper_[j] ? up_[j] : lo_[j];
    }
    for (std::size_t i = 0; i < M_; ++i) {
      art_sign_[i] = 1.0;
      lo_[N_ + i] = 0.0;
      up_[N_ + i] = 0.0;
      x_[N_ + i] = 0.0;
      at_upper_[N_ + i] = false;
      head_[i] = warm.basic[i];
      pos_[warm.basic[i]] = i;
    }
    if (!refactor()) return false;
    for (std::size_t r = 0; r < M_; ++r) {
      const std::size_t j = head_[r];
      if (x_[j] < lo_[j] - opt_.feasibility_tol * bscale_ || x_[j] > up_[j] + opt_.feasibility_tol * bscale_)
        return false;
    }
    return true;
  }

  void set_phase1_costs() {
    std::fill(cost_.begin(), cost_.end(), 0.0);
    for (std::size_t i = 0; i < M_; ++i) cost_[N_ + i] = 1.0;
  }

  void set_phase2_costs() {
    std::fill(cost_.begin(), cost_.end(), 0.0);
    for (std::size_t j = 0; j < N_; ++j) cost_[j] = lp_.c[j];
  }

  // Gauss-Jordan inverse of the basis matrix with partial pivoting, then
  // recompute the basic values. Returns false if the basis is singular.
  bool refactor() {
    std::vector<double> B(M_ * M_);
    for (std::size_t i = 0; i < M_; ++i)
      for (std::size_t r = 0; r < M_; ++r) B[i * M_ + r] = coef(i, head_[r]);
    std::vector<double> inv(M_ * M_, 0.0);
    for (std::size_t i = 0; i < M_; ++i) inv[i * M_ + i] = 1.0;
    for (std::size_t col = 0; col < M_; ++col) {
      std::size_t piv = col;
      double best = std::abs(B[col * M_ + col]);
      for (std::size_t i = col + 1; i < M_; ++i) {
        const double v = std::abs(B[i * M_ + col]);
        if (v > best) {
          best = v;
          piv = i;
        }
      }
      if (best < 1e-12) return false;
      if (piv != col) {
        for (std::size_t k = 0; k < M_; ++k) {
          std::swap(B[piv * M_ + k], B[col * M_ + k]);
          std::swap(inv[piv * M_ + k], inv[col * M_ + k]);
        }
      }
      const double d = 1.0 / B[col * M_ + col];
      for (std::size_t k = 0; k < M_; ++k) {
        B[col * M_ + k] *= d;
        inv[col * M_ + k] *= d;
      }
      for (std::size_t i = 0; i < M_; ++i) {
        if (i == col) continue;
        const double f = B[i * M_ + col];
        if (f == 0.0) continue;
        for (std::size_t k = 0; k < M_; ++k) {
          B[i * M_ + k] -= f * B[col * M_ + k];
          inv[i * M_ + k] -= f * inv[col * M_ + k];
        }
      }
    }
    // inv is (B)⁻¹ where B[i][r] is row i of basis column r, so row r of inv
    // maps a right-hand side to the value of basic variable r.
    binv_ = std::move(inv);
    recompute_basic_values();
    since_refactor_ = 0;
    return true;
  }

  void recompute_basic_values() {
    Vector rhs(lp_.b_eq);
    for (std::size_t i = 0; i < M_; ++i) {
      const auto row = lp_.A_eq.row(i);
      double s = 0.0;
      for (std::size_t j = 0; j < N_; ++j)
        if (pos_[j] == kNotBasic) s += row[j] * x_[j];
      if (pos_[N_ + i] == kNotBasic) s += art_sign_[i] * x_[N_ + i];
      rhs[i] -= s;
    }
    for (std::size_t r = 0; r < M_; ++r) {
      double s = 0.0;
      for (std::size_t i = 0; i < M_; ++i) s += binv(r, i) * rhs[i];
      x_[head_[r]] = s;
    }
  }

  Vector compute_duals() {
    Vector pi(M_, 0.0);
    for (std::size_t r = 0; r < M_; ++r) {
      const double cb = cost_[head_[r]];
      if (cb == 0.0) continue;
      for (std::size_t i = 0; i < M_; ++i) pi[i] += cb * binv(r, i);
    }
    return pi;
  }

  // Reduced costs of every variable (basic ones come out ~0).
  void compute_reduced_costs(const Vector& pi, Vector& d) {
    d.assign(cost_.begin(), cost_.end());
    for (std::size_t i = 0; i < M_; ++i) {
      const double p = pi[i];
      if (p == 0.0) continue;
      const auto row = lp_.A_eq.row(i);
      for (std::size_t j = 0; j < N_; ++j) d[j] -= p * row[j];
      d[N_ + i] -= p * art_sign_[i];
    }
  }

  double objective() const {
    double s = 0.0;
    for (std::size_t j = 0; j < total_; ++j) s += cost_[j] * x_[j];
    return s;
  }

  // Returns the entering variable or total_ when the basis is optimal.
  std::size_t price(const Vector& d) const {
    std::size_t best = total_;
    double best_val = 0.0;
    for (std::size_t j = 0; j < total_; ++j) {
      if (pos_[j] != kNotBasic || up_[j] - lo_[j] <= 0.0) continue;
      double viol = 0.0;
      if (!at_upper_[j] && d[j] < -opt_.optimality_tol) viol = -d[j];
      else if (at_upper_[j] && d[j] > opt_.optimality_tol) viol = d[j];
      if (viol <= 0.0) continue;
      if (bland_) return j;
      if (viol > best_val) {
        best_val = viol;
        best = j;
      }
    }
    return best;
  }

  void iterate() {
    Vector pi;
    Vector d;
    Vector alpha(M_);
    double best_obj = objective();
    std::size_t stall = 0;
    const std::size_t stall_limit = 3 * (N_ + M_);
    bool fresh = true;
    bland_ = false;
    while (true) {
      if (since_refactor_ >= opt_.refactor_every) {
        if (!refactor()) throw NumericalError("bounded simplex: singular basis");
        fresh = true;
      }
      pi = compute_duals();
      compute_reduced_costs(pi, d);
      const std::size_t q = price(d);
      if (q == total_) {
        if (fresh) return;
        // confirm optimality on a clean factorization
        if (!refactor()) throw NumericalError("bounded simplex: singular basis");
        fresh = true;
        continue;
      }
      fresh = false;
      if (pivots_ >= pivot_cap_) throw PivotLimit(pivots_);

      for (std::size_t r = 0; r < M_; ++r) {
        double s = 0.0;
        for (std::size_t i = 0; i < M_; ++i) {
          const double a = coef(i, q);
          if (a != 0.0) s += binv(r, i) * a;
        }
        alpha[r] = s;
      }
      const double dir = at_upper_[q] ? -1.0 : 1.0;

      // Ratio test on x_B(θ) = x_B − θ·dir·α. Dantzig mode uses a Harris
      // two-pass test (bound relaxed by the feasibility tolerance, then the
      // largest pivot among the candidates); Bland mode takes the exact
      // minimum ratio with ties to the smallest variable index.
      const double range = up_[q] - lo_[q];
      auto ratio_for = [&](std::size_t r, double slack) {
        const double delta = dir * alpha[r];
        const std::size_t j = head_[r];
        if (delta > 0.0) return (x_[j] - lo_[j] + slack) / delta;
        if (up_[j] < kInf) return (up_[j] - x_[j] + slack) / -delta;
        return kInf;
      };
      const double slack = bland_ ? 0.0 : opt_.feasibility_tol;
      double theta_rows = kInf;
      for (std::size_t r = 0; r < M_; ++r) {
        if (std::abs(alpha[r]) <= opt_.pivot_tol) continue;
        theta_rows = std::min(theta_rows, ratio_for(r, slack));
      }
      bool flip = range <= theta_rows;
      std::size_t leave = M_;
      double theta = range;
      if (!flip) {
        if (theta_rows == kInf) throw NumericalError("bounded simplex: unbounded ray");
        double best_piv = 0.0;
        for (std::size_t r = 0; r < M_; ++r) {
          if (std::abs(alpha[r]) <= opt_.pivot_tol) continue;
          const double ratio = ratio_for(r, 0.0);
          if (ratio > theta_rows) continue;
          const bool take = bland_ ? (leave == M_ || head_[r] < head_[leave])
                                   : std::abs(alpha[r]) > best_piv;
          if (take) {
            best_piv = std::abs(alpha[r]);
            leave = r;
            theta = ratio;
          }
        }
      }
      theta = std::max(theta, 0.0);

      for (std::size_t r = 0; r < M_; ++r) x_[head_[r]] -= theta * dir * alpha[r];
      ++pivots_;
      if (flip) {
        at_upper_[q] = !at_upper_[q];
        x_[q] = at_upper_[q] ? up_[q] : lo_[q];
      } else {
        x_[q] += dir * theta;
        const std::size_t out = head_[leave];
        const double delta = dir * alpha[leave];
        at_upper_[out] = delta < 0.0;
        x_[out] = at_upper_[out] ? up_[out] : lo_[out];
        pos_[out] = kNotBasic;
        head_[leave] = q;
        pos_[q] = leave;
        at_upper_[q] = false;
        const double inv = 1.0 / alpha[leave];
        for (std::size_t i = 0; i < M_; ++i) binv(leave, i) *= inv;
        for (std::size_t r = 0; r < M_; ++r) {
          if (r == leave || alpha[r] == 0.0) continue;
          const double f = alpha[r];
          for (std::size_t i = 0; i < M_; ++i) binv(r, i) -= f * binv(leave, i);
        }
        ++since_refactor_;
      }

      const double obj = objective();
      if (obj < best_obj - 1e-12 * (1.0 + std::abs(best_obj))) {
        best_obj = obj;
        stall = 0;
      } else if (++stall >= stall_limit) {
        bland_ = true;
      }
    }
  }

  LpSolution finish(LpStatus status) {
    if (!refactor()) throw NumericalError("bounded simplex: singular basis");
    LpSolution sol;
    sol.status = status;
    sol.pivots = pivots_;
    sol.x.assign(N_, 0.0);
    for (std::size_t j = 0; j < N_; ++j) sol.x[j] = std::clamp(x_[j], lo_[j], up_[j]);
    double obj = 0.0;
    for (std::size_t j = 0; j < N_; ++j) obj += lp_.c[j] * sol.x[j];
    sol.objective = obj;
    if (status == LpStatus::optimal) {
      sol.duals = compute_duals();
      Vector d;
      compute_reduced_costs(sol.duals, d);
      sol.reduced_costs.assign(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(N_));
      bool structural = true;
      for (std::size_t r = 0; r < M_; ++r) structural = structural && head_[r] < N_;
      if (structural) {
        LpBasis basis;
        basis.basic = head_;
        basis.at_upper.assign(N_, false);
        for (std::size_t j = 0; j < N_; ++j) basis.at_upper[j] = pos_[j] == kNotBasic && at_upper_[j];
        sol.basis = std::move(basis);
      }
    }
    return sol;
  }

  const BoundedLp& lp_;
  LpOptions opt_;
  std::size_t M_;
  std::size_t N_;
  std::size_t total_;
  Vector lo_;
  Vector up_;
  Vector cost_;
  Vector x_;
  std::vector<bool> at_upper_;
  std::vector<std::size_t> pos_;
  std::vector<std::size_t> head_;
  Vector art_sign_;
  std::vector<double> binv_;
  double bscale_ = 1.0;
  std::size_t pivots_ = 0;
  std::size_t since_refactor_ = 0;
  std::size_t pivot_cap_;
  bool bland_ = false;
};

}  // namespace

LpSolution solve_bounded_lp(const BoundedLp& lp, const LpBasis* warm, const LpOptions& options) {
  lp.validate();
  BoundedSimplex simplex(lp, options);
  return simplex.solve(warm);
}

bool certify_optimal(const BoundedLp& lp, const LpSolution& sol, double tol) {
  if (sol.status != LpStatus::optimal) return false;
  const std::size_t N = lp.num_vars();
  const std::size_t M = lp.num_rows();
  if (sol.x.size() != N || sol.duals.size() != M) return false;
  for (std::size_t j = 0; j < N; ++j)
    if (sol.x[j] < lp.lower[j] || sol.x[j] > lp.upper[j]) return false;
  const Vector Ax = matvec(lp.A_eq, sol.x);
  if (norm_inf(subtract(Ax, lp.b_eq)) > tol * std::max(1.0, norm_inf(lp.b_eq))) return false;
  const Vector Atpi = matvec_transposed(lp.A_eq, sol.duals);
  for (std::size_t j = 0; j < N; ++j) {
    const double d = lp.c[j] - Atpi[j];
    const double width = lp.upper[j] - lp.lower[j];
    const double bt = tol * std::max(1.0, width);
    const bool at_lo = sol.x[j] - lp.lower[j] <= bt;
    const bool at_up = lp.upper[j] - sol.x[j] <= bt;
    if (at_lo && at_up) continue;
    if (at_lo && d < -tol) return false;
    if (at_up && d > tol) return false;
    if (!at_lo && !at_up && std::abs(d) > tol) return false;
  }
  return true;
}

BoundedLp build_split_lp(const DenseMatrix& A, std::span<const double> b, std::span<const double> y,
                         double alpha, double bound) {
  const std::size_t m = A.rows();
  const std::size_t n = A.cols();
  if (y.size() != n || b.size() != m) throw ContractViolation("build_split_lp: dimension mismatch");
  if (!(alpha > 0.0) || !(bound > 0.0)) throw ContractViolation("build_split_lp: alpha and bound must be positive");
  BoundedLp lp;
  lp.c.resize(2 * n);
  for (std::size_t j = 0; j < n; ++j) {
    lp.c[j] = alpha - y[j];
    lp.c[n + j] = alpha + y[j];
  }
  std::vector<double> entries(m * 2 * n);
  for (std::size_t i = 0; i < m; ++i) {
    const auto row = A.row(i);
    double* out = entries.data() + i * 2 * n;
    for (std::size_t j = 0; j < n; ++j) {
      out[j] = row[j];
      out[n + j] = -row[j];
    }
  }
  lp.A_eq = DenseMatrix(m, 2 * n, std::move(entries));
  lp.b_eq.assign(b.begin(), b.end());
  lp.lower.assign(2 * n, 0.0);
  lp.upper.assign(2 * n, bound);
  return lp;
}

Vector merge_split(std::span<const double> xhat) {
  if (xhat.size() % 2 != 0) throw ContractViolation("merge_split: odd length");
  const std::size_t n = xhat.size() / 2;
  Vector x(n);
  for (std::size_t j = 0; j < n; ++j) x[j] = xhat[j] - xhat[n + j];
  return x;
}

}  // namespace sortedl1l2
