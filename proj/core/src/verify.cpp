#include "lpsym/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <ostream>
#include <thread>

#include "lpsym/quadrature.hpp"

namespace lpsym {

double DeterminingResidual::scale() const noexcept {
  return 1.0 + std::abs(value.b) + std::abs(value.e1) + std::abs(value.e2);
}

namespace {

struct Partials {
  FieldValue dx, dy, dt;
};

FieldValue central(const ElectromagneticField& f, LabPoint lo, LabPoint hi, double h) {
  const FieldValue a = f.evaluate(lo.x, lo.y, lo.t);
  const FieldValue b = f.evaluate(hi.x, hi.y, hi.t);
  return {(b.e1 - a.e1) / (2 * h), (b.e2 - a.e2) / (2 * h), (b.b - a.b) / (2 * h)};
}

Partials partials(const ElectromagneticField& f, double x, double y, double t, const FdPolicy& fd, bool need_t) {
  const double hx = fd.step_for(x);
  const double hy = fd.step_for(y);
  const double ht = fd.step_for(t);
  Partials p;
  p.dx = central(f, {x - hx, y, t}, {x + hx, y, t}, hx);
  p.dy = central(f, {x, y - hy, t}, {x, y + hy, t}, hy);
  if (need_t) p.dt = central(f, {x, y, t - ht}, {x, y, t + ht}, ht);
  return p;
}

}  // namespace

DeterminingResidual determining_residual(const ElectromagneticField& field, const SymmetryParams& params, double x,
                                         double y, double t, FdPolicy fd) {
  const GeneratorCoefficients c = params.coefficients(t);
  const GeneratorValue g = c.generator(x, y);
  const FieldValue f = field.evaluate(x, y, t);
  const Partials d = partials(field, x, y, t, fd, g.tau != 0.0);
  auto G = [&](double FieldValue::*m) { return g.tau * (d.dt.*m) + g.eta1 * (d.dx.*m) + g.eta2 * (d.dy.*m); };

  const double rr = c.rho[0] * c.rho[1];
  const double om = c.omega[0];
  const double omd = c.omega[1];
  const double omdd = c.omega[2];
  const double q = c.radial_rate();
  const double cubic = c.radial_accel();
  const double gain = -3.0 * rr + c.k;

  DeterminingResidual r;
  r.value = f;
  r.r_b = G(&FieldValue::b) + 2.0 * rr * f.b + 2.0 * omd;
  r.r_e1 = G(&FieldValue::e1) -
           (gain * f.e1 - om * f.e2 - (q * y + omd * x + c.a2[1]) * f.b + cubic * x - omdd * y + c.a1[2]);
  r.r_e2 = G(&FieldValue::e2) -
           (gain * f.e2 + om * f.e1 + (q * x - omd * y + c.a1[1]) * f.b + cubic * y + omdd * x + c.a2[2]);
  return r;
}

double faraday_residual(const ElectromagneticField& field, double x, double y, double t, FdPolicy fd) {
  const Partials d = partials(field, x, y, t, fd, true);
  return d.dx.e2 - d.dy.e1 + d.dt.b;
}

double GridAxis::at(std::size_t i) const noexcept {
  if (count <= 1) return lo;
  return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
}

LabPoint GridSpec::point(std::size_t index) const noexcept {
  const std::size_t it = index % t.count;
  const std::size_t iy = (index / t.count) % y.count;
  const std::size_t ix = index / (t.count * y.count);
  return {x.at(ix), y.at(iy), t.at(it)};
}

void ResidualReport::summarize() {
  b = e1 = e2 = faraday = {};
  singular_rows = 0;
  std::size_t regular = 0;
  double sb = 0, s1 = 0, s2 = 0, sf = 0;
  auto track = [](ResidualSummary& s, double& sq, double v, std::size_t row) {
    sq += v * v;
    if (v > s.max_scaled) {
      s.max_scaled = v;
      s.worst_row = row;
    }
  };
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const ResidualRow& r = rows[i];
    if (r.singular) {
      ++singular_rows;
      continue;
    }
    ++regular;
    track(b, sb, std::abs(r.r_b) / r.scale, i);
    track(e1, s1, std::abs(r.r_e1) / r.scale, i);
    track(e2, s2, std::abs(r.r_e2) / r.scale, i);
    track(faraday, sf, std::abs(r.r_faraday) / r.scale, i);
  }
  if (regular > 0) {
    const auto n = static_cast<double>(regular);
    b.rms_scaled = std::sqrt(sb / n);
    e1.rms_scaled = std::sqrt(s1 / n);
    e2.rms_scaled = std::sqrt(s2 / n);
    faraday.rms_scaled = std::sqrt(sf / n);
  }
}

bool ResidualReport::determining_pass() const noexcept {
  const double tol = options.tolerances.determining;
  return b.max_scaled <= tol && e1.max_scaled <= tol && e2.max_scaled <= tol;
}

bool ResidualReport::faraday_pass() const noexcept { return faraday.max_scaled <= options.tolerances.faraday; }

bool ResidualReport::pass() const noexcept {
  if (singular_rows == rows.size()) return false;
  if (options.determining && !determining_pass()) return false;
  if (options.faraday && !faraday_pass()) return false;
  return true;
}

void ResidualReport::write_csv(std::ostream& out) const {
  out << "x,y,t,E1,E2,B,R_B,R_E1,R_E2,R_faraday,scale,status\n";
  for (const ResidualRow& r : rows) {
    out << format_double(r.point.x) << ',' << format_double(r.point.y) << ',' << format_double(r.point.t) << ',';
    if (r.singular) {
      out << ",,,,,,,,singular\n";
      continue;
    }
    out << format_double(r.value.e1) << ',' << format_double(r.value.e2) << ',' << format_double(r.value.b) << ','
        << format_double(r.r_b) << ',' << format_double(r.r_e1) << ',' << format_double(r.r_e2) << ','
        << format_double(r.r_faraday) << ',' << format_double(r.scale) << ",ok\n";
  }
}

void ResidualReport::write_summary(std::ostream& out) const {
  auto line = [&](const char* name, const ResidualSummary& s, double tol, bool used) {
    out << name << ": max_scaled=" << format_double(s.max_scaled) << " rms_scaled=" << format_double(s.rms_scaled)
        << " tol=" << format_double(tol);
    if (!used) {
      out << " (not checked)\n";
      return;
    }
    out << (s.max_scaled <= tol ? " PASS" : " FAIL");
    if (s.max_scaled > tol && s.worst_row < rows.size()) {
      const LabPoint& p = rows[s.worst_row].point;
      out << " worst at (x=" << format_double(p.x) << ", y=" << format_double(p.y) << ", t=" << format_double(p.t)
          << ")";
    }
    out << '\n';
  };
  out << "points: " << rows.size() << " (singular: " << singular_rows << ")\n";
  line("R_B", b, options.tolerances.determining, options.determining);
  line("R_E1", e1, options.tolerances.determining, options.determining);
  line("R_E2", e2, options.tolerances.determining, options.determining);
  line("R_faraday", faraday, options.tolerances.faraday, options.faraday);
  out << "result: " << (pass() ? "PASS" : "FAIL") << '\n';
}

ResidualReport check_field(const ElectromagneticField& field, const SymmetryParams& params, const GridSpec& grid,
                           CheckOptions options) {
  ResidualReport report;
  report.grid = grid;
  report.options = options;
  report.rows.resize(grid.size());

  auto evaluate = [&](std::size_t i) {
    ResidualRow& row = report.rows[i];
    row.point = grid.point(i);
    const LabPoint& p = row.point;
    try {
      if (options.determining) {
        const DeterminingResidual d = determining_residual(field, params, p.x, p.y, p.t, options.fd);
        row.value = d.value;
        row.r_b = d.r_b;
        row.r_e1 = d.r_e1;
        row.r_e2 = d.r_e2;
      } else {
        row.value = field.evaluate(p.x, p.y, p.t);
      }
      if (options.faraday) row.r_faraday = faraday_residual(field, p.x, p.y, p.t, options.fd);
      row.scale = 1.0 + std::abs(row.value.b) + std::abs(row.value.e1) + std::abs(row.value.e2);
    } catch (const Error& e) {
      row.singular = true;
      row.note = e.what();
    }
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(options.workers, static_cast<unsigned>(grid.size())));
  if (workers == 1) {
    for (std::size_t i = 0; i < grid.size(); ++i) evaluate(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < grid.size(); i = next++) evaluate(i);
      });
    }
    for (auto& th : pool) th.join();
  }
  report.summarize();
  return report;
}

double orbit_residual(const ElectromagneticField& field, const SymmetryParams& params, const Trajectory& orbit,
                      double epsilon, double stencil) {
  orbit.validate();
  const std::size_t n = orbit.samples.size();
  std::vector<double> ts(n), xs(n), ys(n), dxs(n), dys(n);
  for (std::size_t i = 0; i < n; ++i) {
    const PhaseState& s = orbit.samples[i];
    const GeneratorCoefficients c = params.coefficients(s.t);
    const GeneratorValue g = c.generator(s.q1, s.q2);
    const double rad = c.radial();
    const double rad_rate = c.radial_rate();
    const double om = c.omega[0];
    const double omd = c.omega[1];
    // Total derivatives along the orbit.
    const double deta1 = rad * s.v1 - om * s.v2 + rad_rate * s.q1 - omd * s.q2 + c.a1[1];
    const double deta2 = om * s.v1 + rad * s.v2 + omd * s.q1 + rad_rate * s.q2 + c.a2[1];
    const double dtau = 2.0 * c.rho[0] * c.rho[1];
    const double dT = 1.0 + epsilon * dtau;
    if (!(dT > 0.0)) throw Error("transformed time is not monotone; reduce epsilon");
    ts[i] = s.t + epsilon * g.tau;
    xs[i] = s.q1 + epsilon * g.eta1;
    ys[i] = s.q2 + epsilon * g.eta2;
    dxs[i] = (s.v1 + epsilon * deta1) / dT;
    dys[i] = (s.v2 + epsilon * deta2) / dT;
    if (i > 0 && !(ts[i] > ts[i - 1])) throw Error("transformed time is not monotone; reduce epsilon");
  }

  const double h = stencil;
  // Margin keeps the outermost stencil nodes inside the data after rounding.
  const double margin = 2.0 * h + 1e-9 * (1.0 + std::abs(ts.front()) + std::abs(ts.back()));
  const double lo = ts.front() + margin;
  const double hi = ts.back() - margin;
  if (!(hi > lo)) throw Error("orbit too short for the re-gridding stencil");
  const auto points = static_cast<std::size_t>(std::floor((hi - lo) / h)) + 1;

  double worst = 0.0;
  for (std::size_t k = 0; k < points; ++k) {
    const double t = lo + h * static_cast<double>(k);
    std::array<double, 5> fx{}, fy{};
    for (int j = -2; j <= 2; ++j) {
      const double tj = t + h * j;
      fx[static_cast<std::size_t>(j + 2)] = hermite_interpolate(ts, xs, dxs, tj).value;
      fy[static_cast<std::size_t>(j + 2)] = hermite_interpolate(ts, ys, dys, tj).value;
    }
    auto d1 = [h](const std::array<double, 5>& f) { return (f[0] - 8.0 * f[1] + 8.0 * f[3] - f[4]) / (12.0 * h); };
    auto d2 = [h](const std::array<double, 5>& f) {
      return (-f[0] + 16.0 * f[1] - 30.0 * f[2] + 16.0 * f[3] - f[4]) / (12.0 * h * h);
    };
    const FieldValue v = field.evaluate(fx[2], fy[2], t);
    const double n1 = d2(fx) - v.e1 - d1(fy) * v.b;
    const double n2 = d2(fy) - v.e2 + d1(fx) * v.b;
    worst = std::max({worst, std::abs(n1), std::abs(n2)});
  }
  return worst;
}

OrbitTestResult orbit_symmetry_test(const ElectromagneticField& field, const SymmetryParams& params,
                                    const PhaseState& initial, OrbitTestOptions options) {
  const Trajectory orbit =
      integrate_lab(field, initial, initial.t + options.span, {.step = options.step, .estimate_error = false});
  if (!orbit.info.ok) throw Error("orbit integration failed: " + orbit.info.failure);
  OrbitTestResult r;
  r.residual_full = orbit_residual(field, params, orbit, options.epsilon, options.stencil);
  r.residual_half = orbit_residual(field, params, orbit, 0.5 * options.epsilon, options.stencil);
  r.floor = orbit_residual(field, params, orbit, 0.0, options.stencil);
  r.ratio = r.residual_half > 0.0 ? r.residual_full / r.residual_half : 0.0;
  r.evaluation_points = static_cast<std::size_t>(std::floor((options.span - 4.0 * options.stencil) / options.stencil)) + 1;
  return r;
}

std::string_view verdict_name(OrbitVerdict v) noexcept {
  switch (v) {
    case OrbitVerdict::Symmetric: return "symmetric";
    case OrbitVerdict::Exact: return "exact";
    case OrbitVerdict::Broken: return "broken";
  }
  return "broken";
}

OrbitVerdict classify_orbit(const OrbitTestResult& r, double ratio_lo, double ratio_hi) {
  if (r.residual_full <= 10.0 * r.floor + 1e-12) return OrbitVerdict::Exact;
  if (r.ratio >= ratio_lo && r.ratio <= ratio_hi) return OrbitVerdict::Symmetric;
  return OrbitVerdict::Broken;
}

}  // namespace lpsym
