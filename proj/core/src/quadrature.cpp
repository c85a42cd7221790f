#include "lpsym/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "lpsym/error.hpp"

namespace lpsym {
namespace {

struct SimpsonState {
  const ScalarFn& f;
  int max_depth;
  bool failed = false;
};

double simpson_step(SimpsonState& s, double a, double b, double fa, double fm, double fb, double whole,
                    double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = s.f(lm);
  const double frm = s.f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  if (depth >= s.max_depth) {
    s.failed = true;
    return left + right + delta / 15.0;
  }
  return simpson_step(s, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
         simpson_step(s, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
}

constexpr std::array<double, 5> kGaussNodes{0.14887433898163122, 0.4333953941292472, 0.6794095682990244,
                                            0.8650633666889845, 0.9739065285171717};
constexpr std::array<double, 5> kGaussWeights{0.295524224714753, 0.2692667193099965, 0.219086362515982,
                                              0.14945134915058036, 0.06667134430868807};

}  // namespace

double adaptive_simpson(const ScalarFn& f, double a, double b, SimpsonOptions options) {
  if (a == b) return 0.0;
  if (b < a) return -adaptive_simpson(f, b, a, options);
  SimpsonState state{f, options.max_depth};
  // Split once up front so an integrand that happens to vanish at the three
  // initial nodes (sin over a full period) is still refined.
  const double m = 0.5 * (a + b);
  double total = 0.0;
  for (const auto& [lo, hi] : {std::pair{a, m}, std::pair{m, b}}) {
    const double fa = f(lo);
    const double fb = f(hi);
    const double fm = f(0.5 * (lo + hi));
    const double whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
    total += simpson_step(state, lo, hi, fa, fm, fb, whole, 0.5 * options.abs_tol, 0);
  }
  if (state.failed) {
    throw QuadratureError("adaptive Simpson did not converge on [" + std::to_string(a) + ", " +
                          std::to_string(b) + "]");
  }
  return total;
}

double quad(const Expression& f, double lower, double upper, SimpsonOptions options) {
  if (f.varnames().size() != 1) throw Error("quad expects a function of one variable");
  return adaptive_simpson([&f](double t) { return f({t}); }, lower, upper, options);
}

double gauss_legendre(const ScalarFn& f, double a, double b, int panels) {
  if (a == b) return 0.0;
  panels = std::max(panels, 1);
  const double width = (b - a) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + width * p;
    const double mid = lo + 0.5 * width;
    const double half = 0.5 * width;
    double sum = 0.0;
    for (std::size_t i = 0; i < kGaussNodes.size(); ++i) {
      sum += kGaussWeights[i] * (f(mid - half * kGaussNodes[i]) + f(mid + half * kGaussNodes[i]));
    }
    total += sum * half;
  }
  return total;
}

int panels_for_length(double length, double panel_width) {
  return std::max(1, static_cast<int>(std::ceil(std::abs(length) / panel_width)));
}

HermiteTable::HermiteTable(double start, double spacing, std::vector<double> values, std::vector<double> slopes)
    : start_(start), spacing_(spacing), values_(std::move(values)), slopes_(std::move(slopes)) {
  if (values_.size() < 2 || values_.size() != slopes_.size() || !(spacing_ > 0.0)) {
    throw Error("HermiteTable needs at least two nodes, matching slopes and positive spacing");
  }
}

bool HermiteTable::contains(double t) const noexcept { return t >= start_ && t <= end(); }

std::size_t HermiteTable::segment(double t, double& local) const {
  if (!contains(t)) {
    throw RangeError("time " + std::to_string(t) + " outside tabulated range [" + std::to_string(start_) + ", " +
                     std::to_string(end()) + "]");
  }
  const double pos = (t - start_) / spacing_;
  auto i = static_cast<std::size_t>(pos);
  if (i >= values_.size() - 1) i = values_.size() - 2;
  local = pos - static_cast<double>(i);
  return i;
}

double HermiteTable::value(double t) const {
  double s = 0.0;
  const std::size_t i = segment(t, s);
  const double s2 = s * s;
  const double s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1;
  const double h10 = s3 - 2 * s2 + s;
  const double h01 = -2 * s3 + 3 * s2;
  const double h11 = s3 - s2;
  return h00 * values_[i] + h10 * spacing_ * slopes_[i] + h01 * values_[i + 1] + h11 * spacing_ * slopes_[i + 1];
}

double HermiteTable::slope(double t) const {
  double s = 0.0;
  const std::size_t i = segment(t, s);
  const double s2 = s * s;
  const double d00 = 6 * s2 - 6 * s;
  const double d10 = 3 * s2 - 4 * s + 1;
  const double d01 = -6 * s2 + 6 * s;
  const double d11 = 3 * s2 - 2 * s;
  return (d00 * values_[i] + d01 * values_[i + 1]) / spacing_ + d10 * slopes_[i] + d11 * slopes_[i + 1];
}

HermitePoint hermite_interpolate(const std::vector<double>& xs, const std::vector<double>& ys,
                                 const std::vector<double>& slopes, double x) {
  if (xs.size() < 2 || x < xs.front() || x > xs.back()) {
    throw RangeError("interpolation abscissa " + std::to_string(x) + " outside data range");
  }
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  std::size_t i = it == xs.end() ? xs.size() - 2 : static_cast<std::size_t>(it - xs.begin()) - 1;
  if (i >= xs.size() - 1) i = xs.size() - 2;
  const double h = xs[i + 1] - xs[i];
  const double s = (x - xs[i]) / h;
  const double s2 = s * s;
  const double s3 = s2 * s;
  const double value = (2 * s3 - 3 * s2 + 1) * ys[i] + (s3 - 2 * s2 + s) * h * slopes[i] +
                       (-2 * s3 + 3 * s2) * ys[i + 1] + (s3 - s2) * h * slopes[i + 1];
  const double slope = ((6 * s2 - 6 * s) * ys[i] + (-6 * s2 + 6 * s) * ys[i + 1]) / h +
                       (3 * s2 - 4 * s + 1) * slopes[i] + (3 * s2 - 2 * s) * slopes[i + 1];
  return {value, slope};
}

}  // namespace lpsym
