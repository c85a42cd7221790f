#pragma once

#include <array>
#include <string>

#include "lpsym/expr.hpp"

namespace lpsym {

/// A scalar function of time with its first three symbolic derivatives
/// precomputed. The expression must declare exactly one variable.
class TimeFunction {
 public:
  /// The zero function of `t`.
  TimeFunction();
  explicit TimeFunction(Expression f);

  static TimeFunction constant(double value);
  static TimeFunction parse(std::string_view src);

  double operator()(double t) const { return derivative(0, t); }

  /// Derivative of order 0..3 at `t`.
  double derivative(int order, double t) const;

  /// Expression for the derivative of order 0..3.
  const Expression& expr(int order = 0) const;

  /// True when the function does not depend on time at all.
  bool is_constant() const noexcept { return derivs_[1].is_zero(); }

  /// Largest |f| and smallest |f| over `samples` uniform points in [lo, hi].
  std::pair<double, double> abs_range(double lo, double hi, int samples) const;

 private:
  std::array<Expression, 4> derivs_;
};

inline const std::string kTimeVariable = "t";

}  // namespace lpsym
