#include "lpsym/canonical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

namespace lpsym {

struct CanonicalMap::Tables {
  HermiteTable tbar;
  HermiteTable rotation;
  HermiteTable delta1;
  HermiteTable delta2;
};

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Polar {
  double dx;
  double dy;
  double r2;
};

Polar polar_about(double x, double y, double cx, double cy) {
  const double dx = x - cx;
  const double dy = y - cy;
  const double r2 = dx * dx + dy * dy;
  if (!(std::sqrt(r2) > 1e-13 * (1.0 + std::abs(x) + std::abs(y)))) {
    throw SingularPointError("point (" + std::to_string(x) + ", " + std::to_string(y) +
                             ") coincides with the translated origin");
  }
  return {dx, dy, r2};
}

// Cumulative integral of `rate` over the node grid, zero at node `origin`.
// Each segment uses a single 10-point Gauss-Legendre panel.
std::vector<double> cumulative(const ScalarFn& rate, double start, double spacing, std::size_t n,
                               std::size_t origin) {
  std::vector<double> out(n, 0.0);
  auto node = [&](std::size_t i) { return start + spacing * static_cast<double>(i); };
  for (std::size_t i = origin; i + 1 < n; ++i) out[i + 1] = out[i] + gauss_legendre(rate, node(i), node(i + 1));
  for (std::size_t i = origin; i > 0; --i) out[i - 1] = out[i] - gauss_legendre(rate, node(i - 1), node(i));
  return out;
}

}  // namespace

double nearest_branch(double angle, double reference) noexcept {
  return angle + kTwoPi * std::round((reference - angle) / kTwoPi);
}

CanonicalMap::CanonicalMap(SymmetryParams params, QuadratureGrid grid)
    : params_(std::make_shared<const SymmetryParams>(std::move(params))) {
  if (params_->kind() != SymmetryCase::A) return;
  if (grid.nodes < 4 * grid.pad_nodes + 8) throw Error("quadrature grid too small");

  const SymmetryParams& p = *params_;
  const TimeInterval iv = p.interval();
  const std::size_t n = grid.nodes;
  const std::size_t origin = grid.pad_nodes;
  const double spacing = iv.length() / static_cast<double>(n - 1 - 2 * grid.pad_nodes);
  const double start = iv.start - spacing * static_cast<double>(origin);

  std::vector<double> nodes(n);
  for (std::size_t i = 0; i < n; ++i) {
    nodes[i] = start + spacing * static_cast<double>(i);
    if (std::abs(p.rho()(nodes[i])) < 1e-12) {
      throw InvalidParameters("rho vanishes near t = " + std::to_string(nodes[i]));
    }
  }

  auto tbar_rate = [&p](double t) {
    const double r = p.rho()(t);
    return 1.0 / (r * r);
  };
  auto rotation_rate = [&p](double t) {
    const double r = p.rho()(t);
    return p.omega()(t) / (r * r);
  };

  auto build = [&](const ScalarFn& rate) {
    std::vector<double> slopes(n);
    for (std::size_t i = 0; i < n; ++i) slopes[i] = rate(nodes[i]);
    return HermiteTable(start, spacing, cumulative(rate, start, spacing, n, origin), std::move(slopes));
  };

  auto tables = std::make_shared<Tables>();
  tables->tbar = build(tbar_rate);
  tables->rotation = build(rotation_rate);

  const HermiteTable& tb = tables->tbar;
  const HermiteTable& rot = tables->rotation;
  const double k = p.k();
  auto delta1_rate = [&](double t) {
    const double r = p.rho()(t);
    const double T = rot.value(t);
    return -(p.omega()(t) / (r * r * r)) * std::exp(-k * tb.value(t)) *
           (p.alpha1()(t) * std::sin(T) - p.alpha2()(t) * std::cos(T));
  };
  auto delta2_rate = [&](double t) {
    const double r = p.rho()(t);
    const double T = rot.value(t);
    return -(p.omega()(t) / (r * r * r)) * std::exp(-k * tb.value(t)) *
           (p.alpha1()(t) * std::cos(T) + p.alpha2()(t) * std::sin(T));
  };
  tables->delta1 = build(delta1_rate);
  tables->delta2 = build(delta2_rate);
  tables_ = std::move(tables);
}

std::pair<double, double> CanonicalMap::time_domain() const {
  if (tables_) return {tables_->tbar.start(), tables_->tbar.end()};
  const double inf = std::numeric_limits<double>::infinity();
  return {-inf, inf};
}

QuadratureState CanonicalMap::quadratures(double t) const {
  if (!tables_) throw InvalidParameters("time quadratures exist only in case A");
  const SymmetryParams& p = *params_;
  QuadratureState q;
  q.tbar = tables_->tbar.value(t);
  q.rotation = tables_->rotation.value(t);
  q.delta1 = tables_->delta1.value(t);
  q.delta2 = tables_->delta2.value(t);
  const double r = p.rho()(t);
  const double om = p.omega()(t);
  const double a1 = p.alpha1()(t);
  const double a2 = p.alpha2()(t);
  const double c = std::cos(q.rotation);
  const double s = std::sin(q.rotation);
  const double damp = std::exp(-p.k() * q.tbar);
  q.tbar_rate = 1.0 / (r * r);
  q.rotation_rate = om / (r * r);
  q.delta1_rate = -(om / (r * r * r)) * damp * (a1 * s - a2 * c);
  q.delta2_rate = -(om / (r * r * r)) * damp * (a1 * c + a2 * s);
  return q;
}

CanonicalPoint CanonicalMap::to_canonical(const LabPoint& p) const { return forward(p, nullptr); }

CanonicalPoint CanonicalMap::to_canonical(const LabPoint& p, const CanonicalPoint& previous) const {
  double reference = 0.0;
  switch (params_->kind()) {
    case SymmetryCase::B: reference = params_->omega()(0.0) * previous.tb; break;
    case SymmetryCase::D: reference = previous.xb + params_->omega()(previous.yb) * previous.tb; break;
    default: break;
  }
  return forward(p, &reference);
}

CanonicalPoint CanonicalMap::forward(const LabPoint& lab, const double* angle_reference) const {
  const SymmetryParams& p = *params_;
  const double x = lab.x;
  const double y = lab.y;
  const double t = lab.t;
  switch (p.kind()) {
    case SymmetryCase::A: {
      const QuadratureState q = quadratures(t);
      const double scale = std::exp(-p.k() * q.tbar) / p.rho()(t);
      const double u = x - p.alpha1()(t);
      const double v = y - p.alpha2()(t);
      const double c = std::cos(q.rotation);
      const double s = std::sin(q.rotation);
      return {scale * (u * c + v * s) + q.delta1, scale * (-u * s + v * c) + q.delta2, q.tbar};
    }
    case SymmetryCase::B: {
      const Polar pol = polar_about(x, y, p.center1()(t), p.center2()(t));
      double angle = std::atan2(pol.dy, pol.dx);
      if (angle_reference) angle = nearest_branch(angle, *angle_reference);
      return {std::sqrt(pol.r2), t, angle / p.omega()(t)};
    }
    case SymmetryCase::C: {
      const double a2 = p.a2()(t);
      if (a2 == 0.0) throw SingularPointError("a2 vanishes at t = " + std::to_string(t));
      return {x - p.a1()(t) * y / a2, t, y / a2};
    }
    case SymmetryCase::D: {
      const Polar pol = polar_about(x, y, p.center1()(t), p.center2()(t));
      const double tb = std::log(pol.r2) / (2.0 * p.k());
      double angle = std::atan2(pol.dy, pol.dx);
      if (angle_reference) angle = nearest_branch(angle, *angle_reference);
      return {angle - p.omega()(t) * tb, t, tb};
    }
  }
  return {};
}

double CanonicalMap::invert_tbar(double target) const {
  const HermiteTable& tb = tables_->tbar;
  const std::vector<double>& v = tb.values();
  const bool increasing = v.back() > v.front();
  const double lo_val = increasing ? v.front() : v.back();
  const double hi_val = increasing ? v.back() : v.front();
  if (!(target >= lo_val && target <= hi_val)) {
    throw RangeError("canonical time " + std::to_string(target) + " outside the mapped range [" +
                     std::to_string(lo_val) + ", " + std::to_string(hi_val) + "]");
  }
  // Bracket on the node values, then bisect the interpolant.
  std::size_t lo = 0;
  std::size_t hi = v.size() - 1;
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    if ((v[mid] <= target) == increasing) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  double a = tb.node(lo);
  double b = tb.node(hi);
  for (int i = 0; i < 200 && b - a > 1e-12 * (1.0 + std::abs(a)); ++i) {
    const double m = 0.5 * (a + b);
    if ((tb.value(m) <= target) == increasing) {
      a = m;
    } else {
      b = m;
    }
  }
  double t = 0.5 * (a + b);
  for (int i = 0; i < 2; ++i) {
    const double step = (tb.value(t) - target) / tb.slope(t);
    const double next = t - step;
    if (!(next >= tb.node(lo) && next <= tb.node(hi))) break;
    t = next;
  }
  return t;
}

LabPoint CanonicalMap::from_canonical(const CanonicalPoint& q) const {
  const SymmetryParams& p = *params_;
  switch (p.kind()) {
    case SymmetryCase::A: {
      const double t = invert_tbar(q.tb);
      const QuadratureState s = quadratures(t);
      const double scale = p.rho()(t) * std::exp(p.k() * s.tbar);
      const double c = std::cos(s.rotation);
      const double sn = std::sin(s.rotation);
      const double xr = q.xb - s.delta1;
      const double yr = q.yb - s.delta2;
      return {p.alpha1()(t) + scale * (xr * c - yr * sn), p.alpha2()(t) + scale * (xr * sn + yr * c), t};
    }
    case SymmetryCase::B: {
      if (q.xb == 0.0) throw SingularPointError("zero radius maps onto the translated origin");
      if (q.xb < 0.0) throw RangeError("case B radius must be positive");
      const double t = q.yb;
      const double angle = p.omega()(t) * q.tb;
      return {p.center1()(t) + q.xb * std::cos(angle), p.center2()(t) + q.xb * std::sin(angle), t};
    }
    case SymmetryCase::C: {
      const double t = q.yb;
      return {q.xb + p.a1()(t) * q.tb, p.a2()(t) * q.tb, t};
    }
    case SymmetryCase::D: {
      const double t = q.yb;
      const double r = std::exp(p.k() * q.tb);
      const double angle = q.xb + p.omega()(t) * q.tb;
      return {p.center1()(t) + r * std::cos(angle), p.center2()(t) + r * std::sin(angle), t};
    }
  }
  return {};
}

Jacobian CanonicalMap::jacobian(const LabPoint& lab) const {
  const SymmetryParams& p = *params_;
  const double x = lab.x;
  const double y = lab.y;
  const double t = lab.t;
  Jacobian j{};
  switch (p.kind()) {
    case SymmetryCase::A: {
      const QuadratureState q = quadratures(t);
      const double r = p.rho()(t);
      const double rd = p.rho().derivative(1, t);
      const double scale = std::exp(-p.k() * q.tbar) / r;
      const double scale_rate = -scale * (p.k() * q.tbar_rate + rd / r);
      const double u = x - p.alpha1()(t);
      const double v = y - p.alpha2()(t);
      const double ud = -p.alpha1().derivative(1, t);
      const double vd = -p.alpha2().derivative(1, t);
      const double c = std::cos(q.rotation);
      const double s = std::sin(q.rotation);
      const double along = u * c + v * s;
      const double across = -u * s + v * c;
      const double along_rate = ud * c + vd * s + q.rotation_rate * across;
      const double across_rate = -ud * s + vd * c - q.rotation_rate * along;
      j[0] = {scale * c, scale * s, scale_rate * along + scale * along_rate + q.delta1_rate};
      j[1] = {-scale * s, scale * c, scale_rate * across + scale * across_rate + q.delta2_rate};
      j[2] = {0.0, 0.0, q.tbar_rate};
      return j;
    }
    case SymmetryCase::B: {
      const Polar pol = polar_about(x, y, p.center1()(t), p.center2()(t));
      const double r = std::sqrt(pol.r2);
      const double om = p.omega()(t);
      const double c1 = p.center1().derivative(1, t);
      const double c2 = p.center2().derivative(1, t);
      j[0] = {pol.dx / r, pol.dy / r, -(pol.dx * c1 + pol.dy * c2) / r};
      j[1] = {0.0, 0.0, 1.0};
      j[2] = {-pol.dy / (om * pol.r2), pol.dx / (om * pol.r2), (-pol.dx * c2 + pol.dy * c1) / (om * pol.r2)};
      return j;
    }
    case SymmetryCase::C: {
      const double a1 = p.a1()(t);
      const double a2 = p.a2()(t);
      if (a2 == 0.0) throw SingularPointError("a2 vanishes at t = " + std::to_string(t));
      const double a1d = p.a1().derivative(1, t);
      const double a2d = p.a2().derivative(1, t);
      j[0] = {1.0, -a1 / a2, -y * (a1d * a2 - a1 * a2d) / (a2 * a2)};
      j[1] = {0.0, 0.0, 1.0};
      j[2] = {0.0, 1.0 / a2, -y * a2d / (a2 * a2)};
      return j;
    }
    case SymmetryCase::D: {
      const Polar pol = polar_about(x, y, p.center1()(t), p.center2()(t));
      const double k = p.k();
      const double om = p.omega()(t);
      const double omd = p.omega().derivative(1, t);
      const double c1 = p.center1().derivative(1, t);
      const double c2 = p.center2().derivative(1, t);
      const double tb = std::log(pol.r2) / (2.0 * k);
      const std::array<double, 3> tb_row{pol.dx / (k * pol.r2), pol.dy / (k * pol.r2),
                                         -(pol.dx * c1 + pol.dy * c2) / (k * pol.r2)};
      const std::array<double, 3> angle_row{-pol.dy / pol.r2, pol.dx / pol.r2,
                                            (-pol.dx * c2 + pol.dy * c1) / pol.r2};
      j[0] = {angle_row[0] - om * tb_row[0], angle_row[1] - om * tb_row[1],
              angle_row[2] - om * tb_row[2] - omd * tb};
      j[1] = {0.0, 0.0, 1.0};
      j[2] = tb_row;
      return j;
    }
  }
  return j;
}

std::array<double, 3> canonical_defining_residual(const CanonicalMap& map, const LabPoint& p) {
  const GeneratorValue g = map.params().generator(p.x, p.y, p.t);
  const CanonicalPoint center = map.to_canonical(p);
  auto diff = [&](LabPoint lo, LabPoint hi, double h) {
    const CanonicalPoint a = map.to_canonical(lo, center);
    const CanonicalPoint b = map.to_canonical(hi, center);
    return std::array<double, 3>{(b.xb - a.xb) / (2 * h), (b.yb - a.yb) / (2 * h), (b.tb - a.tb) / (2 * h)};
  };
  const double hx = 1e-5 * (1.0 + std::abs(p.x));
  const double hy = 1e-5 * (1.0 + std::abs(p.y));
  const double ht = 1e-5 * (1.0 + std::abs(p.t));
  const auto dx = diff({p.x - hx, p.y, p.t}, {p.x + hx, p.y, p.t}, hx);
  const auto dy = diff({p.x, p.y - hy, p.t}, {p.x, p.y + hy, p.t}, hy);
  std::array<double, 3> dt{0.0, 0.0, 0.0};
  if (g.tau != 0.0) dt = diff({p.x, p.y, p.t - ht}, {p.x, p.y, p.t + ht}, ht);
  std::array<double, 3> r{};
  for (std::size_t i = 0; i < 3; ++i) r[i] = g.tau * dt[i] + g.eta1 * dx[i] + g.eta2 * dy[i];
  r[2] -= 1.0;
  return r;
}

}  // namespace lpsym
