#include "lpsym/dynamics.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <functional>
#include <istream>
#include <ostream>

#include "lpsym/quadrature.hpp"

namespace lpsym {

std::string_view frame_name(Frame f) noexcept { return f == Frame::Lab ? "lab" : "canonical"; }

void Trajectory::validate() const {
  if (samples.size() < 2) throw Error("trajectory needs at least two samples");
  for (std::size_t i = 1; i < samples.size(); ++i) {
    if (!(samples[i].t > samples[i - 1].t)) {
      throw Error("trajectory times are not strictly increasing at sample " + std::to_string(i));
    }
  }
}

namespace {

using State = std::array<double, 4>;  // q1, q2, v1, v2
using Rhs = std::function<State(double, const State&)>;

State axpy(const State& y, double h, const State& k) {
  return {y[0] + h * k[0], y[1] + h * k[1], y[2] + h * k[2], y[3] + h * k[3]};
}

State rk4_step(const Rhs& f, double t, const State& y, double h) {
  const State k1 = f(t, y);
  const State k2 = f(t + 0.5 * h, axpy(y, 0.5 * h, k1));
  const State k3 = f(t + 0.5 * h, axpy(y, 0.5 * h, k2));
  const State k4 = f(t + h, axpy(y, h, k3));
  State out;
  for (std::size_t i = 0; i < 4; ++i) out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return out;
}

bool finite(const State& y) {
  return std::all_of(y.begin(), y.end(), [](double v) { return std::isfinite(v); });
}

struct Run {
  std::vector<PhaseState> samples;
  bool ok = true;
  std::string failure;
};

Run run_rk4(const Rhs& f, const PhaseState& initial, double t_end, std::size_t steps) {
  Run run;
  run.samples.reserve(steps + 1);
  run.samples.push_back(initial);
  const double t0 = initial.t;
  const double h = (t_end - t0) / static_cast<double>(steps);
  State y{initial.q1, initial.q2, initial.v1, initial.v2};
  for (std::size_t i = 0; i < steps; ++i) {
    const double t = t0 + h * static_cast<double>(i);
    State next;
    try {
      next = rk4_step(f, t, y, h);
    } catch (const Error& e) {
      run.ok = false;
      run.failure = std::string(e.what()) + " (last good time " + format_double(t) + ")";
      return run;
    }
    if (!finite(next)) {
      run.ok = false;
      run.failure = "non-finite state (last good time " + format_double(t) + ")";
      return run;
    }
    y = next;
    const double tn = i + 1 == steps ? t_end : t0 + h * static_cast<double>(i + 1);
    run.samples.push_back({tn, y[0], y[1], y[2], y[3]});
  }
  return run;
}

Trajectory integrate(const Rhs& f, Frame frame, const PhaseState& initial, double t_end,
                     const IntegrateOptions& options) {
  if (!(options.step > 0.0)) throw Error("integration step must be positive");
  if (!(t_end > initial.t)) throw Error("integration end time must exceed the start time");
  const double span = t_end - initial.t;
  const auto steps = static_cast<std::size_t>(std::max(1.0, std::ceil(span / options.step - 1e-9)));

  Run run = run_rk4(f, initial, t_end, steps);
  Trajectory traj;
  traj.frame = frame;
  traj.info.step = span / static_cast<double>(steps);
  traj.info.ok = run.ok;
  traj.info.failure = run.failure;
  if (run.ok && options.estimate_error) {
    const Run fine = run_rk4(f, initial, t_end, 2 * steps);
    if (fine.ok) {
      double worst = 0.0;
      for (std::size_t i = 0; i < run.samples.size(); ++i) {
        const PhaseState& a = run.samples[i];
        const PhaseState& b = fine.samples[2 * i];
        worst = std::max({worst, std::abs(a.q1 - b.q1), std::abs(a.q2 - b.q2)});
      }
      traj.info.error_estimate = worst * 16.0 / 15.0;
    }
  }
  traj.samples = std::move(run.samples);
  return traj;
}

}  // namespace

Trajectory integrate_lab(const ElectromagneticField& field, const PhaseState& initial, double t_end,
                         IntegrateOptions options) {
  const Rhs f = [&field](double t, const State& y) {
    const FieldValue v = field.evaluate(y[0], y[1], t);
    return State{y[2], y[3], v.e1 + y[3] * v.b, v.e2 - y[2] * v.b};
  };
  return integrate(f, Frame::Lab, initial, t_end, options);
}

Trajectory integrate_canonical_case_a(const PlaneFunction& bbar, const PlaneFunction& e1bar,
                                      const PlaneFunction& e2bar, double k, const PhaseState& initial,
                                      double tb_end, IntegrateOptions options) {
  const Rhs f = [&, k](double, const State& y) {
    const double b = bbar(y[0], y[1]);
    const double e1 = e1bar(y[0], y[1]);
    const double e2 = e2bar(y[0], y[1]);
    const double a1 = e1 + (y[3] + k * y[1]) * b - 2.0 * k * y[2] - k * k * y[0];
    const double a2 = e2 - (y[2] + k * y[0]) * b - 2.0 * k * y[3] - k * k * y[1];
    return State{y[2], y[3], a1, a2};
  };
  return integrate(f, Frame::Canonical, initial, tb_end, options);
}

namespace {

std::array<double, 3> solve3(const Jacobian& m, const std::array<double, 3>& rhs) {
  const double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                     m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                     m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  if (det == 0.0 || !std::isfinite(det)) throw SingularPointError("canonical map Jacobian is singular");
  std::array<double, 3> out{};
  for (std::size_t c = 0; c < 3; ++c) {
    Jacobian r = m;
    for (std::size_t i = 0; i < 3; ++i) r[i][c] = rhs[i];
    out[c] = (r[0][0] * (r[1][1] * r[2][2] - r[1][2] * r[2][1]) - r[0][1] * (r[1][0] * r[2][2] - r[1][2] * r[2][0]) +
              r[0][2] * (r[1][0] * r[2][1] - r[1][1] * r[2][0])) /
             det;
  }
  return out;
}

}  // namespace

PhaseState transform_state(const PhaseState& s, const CanonicalMap& map, Direction direction,
                           const CanonicalPoint* previous) {
  if (direction == Direction::LabToCanonical) {
    const LabPoint lab{s.q1, s.q2, s.t};
    const CanonicalPoint q = previous ? map.to_canonical(lab, *previous) : map.to_canonical(lab);
    const Jacobian j = map.jacobian(lab);
    auto rate = [&](std::size_t row) { return j[row][0] * s.v1 + j[row][1] * s.v2 + j[row][2]; };
    const double dtb = rate(2);
    if (dtb == 0.0) throw SingularPointError("canonical time is stationary along the trajectory");
    return {q.tb, q.xb, q.yb, rate(0) / dtb, rate(1) / dtb};
  }
  const LabPoint lab = map.from_canonical({s.q1, s.q2, s.t});
  const auto d = solve3(map.jacobian(lab), {s.v1, s.v2, 1.0});
  if (d[2] == 0.0) throw SingularPointError("lab time is stationary along the trajectory");
  return {lab.t, lab.x, lab.y, d[0] / d[2], d[1] / d[2]};
}

Trajectory transform_trajectory(const Trajectory& traj, const CanonicalMap& map, Direction direction) {
  const Frame want_in = direction == Direction::LabToCanonical ? Frame::Lab : Frame::Canonical;
  if (traj.frame != want_in) throw Error("trajectory frame does not match the transform direction");
  Trajectory out;
  out.frame = direction == Direction::LabToCanonical ? Frame::Canonical : Frame::Lab;
  out.info = traj.info;
  out.samples.reserve(traj.samples.size());
  std::optional<CanonicalPoint> previous;
  for (const PhaseState& s : traj.samples) {
    const PhaseState m = transform_state(s, map, direction, previous ? &*previous : nullptr);
    if (!out.samples.empty() && !(m.t > out.samples.back().t)) {
      throw Error("transformed time is not strictly increasing near t = " + format_double(s.t));
    }
    if (direction == Direction::LabToCanonical) previous = CanonicalPoint{m.q1, m.q2, m.t};
    out.samples.push_back(m);
  }
  return out;
}

std::vector<double> position_deviation(const Trajectory& reference, const Trajectory& other) {
  other.validate();
  const std::size_t n = other.samples.size();
  std::vector<double> ts(n), xs(n), ys(n), vx(n), vy(n);
  for (std::size_t i = 0; i < n; ++i) {
    const PhaseState& s = other.samples[i];
    ts[i] = s.t;
    xs[i] = s.q1;
    ys[i] = s.q2;
    vx[i] = s.v1;
    vy[i] = s.v2;
  }
  std::vector<double> out;
  out.reserve(reference.samples.size());
  for (const PhaseState& s : reference.samples) {
    const double t = std::clamp(s.t, ts.front(), ts.back());
    const double x = hermite_interpolate(ts, xs, vx, t).value;
    const double y = hermite_interpolate(ts, ys, vy, t).value;
    out.push_back(std::hypot(s.q1 - x, s.q2 - y));
  }
  return out;
}

std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
  return std::string(buf.data(), res.ptr);
}

void write_csv(std::ostream& out, const Trajectory& traj) {
  out << "t,q1,q2,v1,v2\n";
  for (const PhaseState& s : traj.samples) {
    out << format_double(s.t) << ',' << format_double(s.q1) << ',' << format_double(s.q2) << ','
        << format_double(s.v1) << ',' << format_double(s.v2) << '\n';
  }
}

Trajectory read_csv(std::istream& in, Frame frame) {
  std::string line;
  if (!std::getline(in, line) || line != "t,q1,q2,v1,v2") throw Error("trajectory CSV header missing");
  Trajectory traj;
  traj.frame = frame;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::array<double, 5> v{};
    const char* p = line.data();
    const char* end = line.data() + line.size();
    for (std::size_t i = 0; i < 5; ++i) {
      const auto res = std::from_chars(p, end, v[i]);
      if (res.ec != std::errc()) throw Error("bad number on trajectory CSV line " + std::to_string(lineno));
      p = res.ptr;
      if (i < 4) {
        if (p == end || *p != ',') throw Error("expected 5 columns on trajectory CSV line " + std::to_string(lineno));
        ++p;
      }
    }
    if (p != end) throw Error("trailing data on trajectory CSV line " + std::to_string(lineno));
    traj.samples.push_back({v[0], v[1], v[2], v[3], v[4]});
  }
  traj.validate();
  return traj;
}

}  // namespace lpsym
