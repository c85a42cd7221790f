#include "lpsym/time_function.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lpsym {

TimeFunction::TimeFunction() : TimeFunction(Expression::constant(0.0, {kTimeVariable})) {}

TimeFunction::TimeFunction(Expression f) {
  if (f.varnames().size() != 1) throw Error("time function must declare exactly one variable");
  const std::string var = f.varnames().front();
  derivs_[0] = std::move(f);
  for (int i = 1; i < 4; ++i) derivs_[i] = derive(derivs_[i - 1], var, 1);
}

TimeFunction TimeFunction::constant(double value) {
  return TimeFunction(Expression::constant(value, {kTimeVariable}));
}

TimeFunction TimeFunction::parse(std::string_view src) {
  return TimeFunction(lpsym::parse(src, {kTimeVariable}));
}

double TimeFunction::derivative(int order, double t) const {
  return expr(order)(std::initializer_list<double>{t});
}

const Expression& TimeFunction::expr(int order) const {
  if (order < 0 || order > 3) throw Error("time derivative order must be between 0 and 3");
  return derivs_[static_cast<std::size_t>(order)];
}

std::pair<double, double> TimeFunction::abs_range(double lo, double hi, int samples) const {
  double largest = 0.0;
  double smallest = std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    const double t = samples == 1 ? lo : lo + (hi - lo) * i / (samples - 1);
    const double v = std::abs((*this)(t));
    largest = std::max(largest, v);
    smallest = std::min(smallest, v);
  }
  return {largest, smallest};
}

}  // namespace lpsym
