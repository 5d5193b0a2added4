#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sortedl1l2 {

/// Raised when a caller breaks a documented precondition (dimension
/// mismatch, out-of-range parameter, infeasible generator request).
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Base class for failures that come out of the numerics themselves.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotPositiveDefinite : public NumericalError {
 public:
  explicit NotPositiveDefinite(std::size_t pivot)
      : NumericalError("not positive definite (pivot " + std::to_string(pivot) + ")"),
        pivot_(pivot) {}
  std::size_t pivot() const noexcept { return pivot_; }

 private:
  std::size_t pivot_;
};

class ZeroIterate : public NumericalError {
 public:
  ZeroIterate() : NumericalError("zero iterate") {}
};

class DegenerateDenominator : public NumericalError {
 public:
  DegenerateDenominator() : NumericalError("degenerate denominator") {}
};

class PivotLimit : public NumericalError {
 public:
  explicit PivotLimit(std::size_t pivots)
      : NumericalError("pivot limit reached after " + std::to_string(pivots) + " pivots") {}
};

class InfeasibleConstraint : public NumericalError {
 public:
  InfeasibleConstraint() : NumericalError("infeasible constraint") {}
};

class InnerStall : public NumericalError {
 public:
  InnerStall(double primal_residual, double dual_residual)
      : NumericalError("inner stall (primal residual " + std::to_string(primal_residual) +
                       ", dual residual " + std::to_string(dual_residual) + ")"),
        primal_(primal_residual),
        dual_(dual_residual) {}
  double primal_residual() const noexcept { return primal_; }
  double dual_residual() const noexcept { return dual_; }

 private:
  double primal_;
  double dual_;
};

}  // namespace sortedl1l2
