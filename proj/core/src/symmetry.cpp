#include "lpsym/symmetry.hpp"

#include <cmath>
#include <string>

namespace lpsym {
namespace {

void check_interval(const TimeInterval& interval) {
  if (!std::isfinite(interval.start) || !std::isfinite(interval.end) || !(interval.start < interval.end)) {
    throw InvalidParameters("working interval must satisfy start < end");
  }
}

// Sign-consistent and bounded away from zero on dense samples.
void check_nonvanishing(const TimeFunction& f, const TimeInterval& interval, const char* name) {
  const int n = kNonvanishingSamples;
  double first_sign = 0.0;
  for (int i = 0; i < n; ++i) {
    const double t = interval.start + interval.length() * i / (n - 1);
    const double v = f(t);
    if (!std::isfinite(v) || std::abs(v) < 1e-12) {
      throw InvalidParameters(std::string(name) + " vanishes near t = " + std::to_string(t));
    }
    const double s = v > 0 ? 1.0 : -1.0;
    if (first_sign == 0.0) first_sign = s;
    if (s != first_sign) throw InvalidParameters(std::string(name) + " changes sign on the working interval");
  }
}

}  // namespace

char case_letter(SymmetryCase c) noexcept {
  switch (c) {
    case SymmetryCase::A: return 'A';
    case SymmetryCase::B: return 'B';
    case SymmetryCase::C: return 'C';
    case SymmetryCase::D: return 'D';
  }
  return '?';
}

std::optional<SymmetryCase> case_from_letter(std::string_view s) noexcept {
  if (s == "A" || s == "a") return SymmetryCase::A;
  if (s == "B" || s == "b") return SymmetryCase::B;
  if (s == "C" || s == "c") return SymmetryCase::C;
  if (s == "D" || s == "d") return SymmetryCase::D;
  return std::nullopt;
}

SymmetryParams SymmetryParams::case_a(double k, TimeFunction rho, TimeFunction omega, TimeFunction alpha1,
                                      TimeFunction alpha2, TimeInterval interval) {
  check_interval(interval);
  check_nonvanishing(rho, interval, "rho");
  SymmetryParams p;
  p.kind_ = SymmetryCase::A;
  p.k_ = k;
  p.interval_ = interval;
  const Expression& r = rho.expr();
  const Expression radial = r * rho.expr(1) + k;
  const Expression r2 = pow(r, 2.0);
  p.a1_ = TimeFunction(r2 * alpha1.expr(1) - radial * alpha1.expr());
  p.a2_ = TimeFunction(r2 * alpha2.expr(1) - radial * alpha2.expr());
  p.rho_ = std::move(rho);
  p.omega_ = std::move(omega);
  p.alpha1_ = std::move(alpha1);
  p.alpha2_ = std::move(alpha2);
  return p;
}

SymmetryParams SymmetryParams::case_b(TimeFunction a1, TimeFunction a2, TimeInterval interval, double omega) {
  check_interval(interval);
  if (!std::isfinite(omega) || omega == 0.0) throw InvalidParameters("case B needs a nonzero constant Omega");
  SymmetryParams p;
  p.kind_ = SymmetryCase::B;
  p.interval_ = interval;
  p.omega_ = TimeFunction::constant(omega);
  p.a1_ = std::move(a1);
  p.a2_ = std::move(a2);
  p.finish_centers();
  return p;
}

SymmetryParams SymmetryParams::case_c(TimeFunction a1, TimeFunction a2, TimeInterval interval) {
  check_interval(interval);
  check_nonvanishing(a2, interval, "a2");
  SymmetryParams p;
  p.kind_ = SymmetryCase::C;
  p.interval_ = interval;
  p.a1_ = std::move(a1);
  p.a2_ = std::move(a2);
  return p;
}

SymmetryParams SymmetryParams::case_d(double k, TimeFunction omega, TimeFunction a1, TimeFunction a2,
                                      TimeInterval interval) {
  check_interval(interval);
  if (!std::isfinite(k) || k == 0.0) throw InvalidParameters("case D needs k != 0");
  SymmetryParams p;
  p.kind_ = SymmetryCase::D;
  p.k_ = k;
  p.interval_ = interval;
  p.omega_ = std::move(omega);
  p.a1_ = std::move(a1);
  p.a2_ = std::move(a2);
  p.finish_centers();
  return p;
}

void SymmetryParams::finish_centers() {
  const Expression& om = omega_.expr();
  const Expression& a1 = a1_.expr();
  const Expression& a2 = a2_.expr();
  if (kind_ == SymmetryCase::B) {
    center1_ = TimeFunction(-a2 / om);
    center2_ = TimeFunction(a1 / om);
  } else if (kind_ == SymmetryCase::D) {
    const Expression den = k_ * k_ + pow(om, 2.0);
    center1_ = TimeFunction(-(k_ * a1 + om * a2) / den);
    center2_ = TimeFunction((om * a1 - k_ * a2) / den);
  }
}

GeneratorCoefficients SymmetryParams::coefficients(double t) const {
  GeneratorCoefficients c;
  c.k = k_;
  if (kind_ == SymmetryCase::A) {
    for (int n = 0; n < 4; ++n) c.rho[static_cast<std::size_t>(n)] = rho_.derivative(n, t);
  }
  for (int n = 0; n < 3; ++n) {
    const auto i = static_cast<std::size_t>(n);
    c.omega[i] = kind_ == SymmetryCase::C ? 0.0 : omega_.derivative(n, t);
    c.a1[i] = a1_.derivative(n, t);
    c.a2[i] = a2_.derivative(n, t);
  }
  return c;
}

GeneratorValue generator_eval(const SymmetryParams& params, double x, double y, double t) {
  return params.generator(x, y, t);
}

std::pair<double, double> derived_translations(const SymmetryParams& params, double t) {
  if (params.kind() != SymmetryCase::A) throw InvalidParameters("derived translations exist only in case A");
  return {params.a1()(t), params.a2()(t)};
}

}  // namespace lpsym
