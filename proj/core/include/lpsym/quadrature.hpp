#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "lpsym/expr.hpp"

namespace lpsym {

using ScalarFn = std::function<double(double)>;

struct SimpsonOptions {
  double abs_tol = 1e-10;
  int max_depth = 48;
};

/// Adaptive Simpson quadrature of f over [a, b] (b < a gives the negated
/// integral). Throws QuadratureError when a subinterval still misses its
/// tolerance at `max_depth`.
double adaptive_simpson(const ScalarFn& f, double a, double b, SimpsonOptions options = {});

/// Integral of a one-variable expression from `lower` to `upper`.
double quad(const Expression& f, double lower, double upper, SimpsonOptions options = {});

/// Composite 10-point Gauss-Legendre rule on `panels` equal panels. The
/// result is a smooth function of the limits, which makes it safe to
/// differentiate numerically.
double gauss_legendre(const ScalarFn& f, double a, double b, int panels = 1);

/// Panel count for gauss_legendre sized to the interval length.
int panels_for_length(double length, double panel_width = 0.25);

/// Piecewise cubic Hermite interpolant on a uniform grid, built from node
/// values and exact node derivatives.
class HermiteTable {
 public:
  HermiteTable() = default;
  HermiteTable(double start, double spacing, std::vector<double> values, std::vector<double> slopes);

  double start() const noexcept { return start_; }
  double end() const noexcept { return start_ + spacing_ * static_cast<double>(values_.size() - 1); }
  std::size_t size() const noexcept { return values_.size(); }
  double node(std::size_t i) const noexcept { return start_ + spacing_ * static_cast<double>(i); }
  const std::vector<double>& values() const noexcept { return values_; }

  bool contains(double t) const noexcept;

  /// Interpolated value; throws RangeError outside [start, end].
  double value(double t) const;
  /// Derivative of the interpolant.
  double slope(double t) const;

 private:
  std::size_t segment(double t, double& local) const;

  double start_ = 0.0;
  double spacing_ = 1.0;
  std::vector<double> values_;
  std::vector<double> slopes_;
};

/// Cubic Hermite interpolation on a non-uniform, strictly increasing abscissa.
/// Returns value and derivative at `x`; throws RangeError outside the data.
struct HermitePoint {
  double value;
  double slope;
};
HermitePoint hermite_interpolate(const std::vector<double>& xs, const std::vector<double>& ys,
                                 const std::vector<double>& slopes, double x);

}  // namespace lpsym
