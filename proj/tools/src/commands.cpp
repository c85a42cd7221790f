#include "lpsym_cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>
#include <vector>

#include "lpsym/dynamics.hpp"
#include "lpsym/verify.hpp"

namespace lpsym::cli {

namespace fs = std::filesystem;

namespace {

std::ofstream open_output(const CommandOptions& options, const std::string& name) {
  fs::create_directories(options.out_dir);
  const fs::path path = fs::path(options.out_dir) / name;
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  return out;
}

GridAxis axis_of(const std::optional<AxisConfig>& a, const char* key) {
  if (!a) throw ConfigError(std::string("missing required key '") + key + "' in [grid]");
  return {a->lo, a->hi, a->count};
}

GridSpec lab_grid(const RunConfig& c) {
  return {axis_of(c.grid_x, "x"), axis_of(c.grid_y, "y"), axis_of(c.grid_t, "t")};
}

template <class F>
void parallel_for(std::size_t n, unsigned workers, F&& body) {
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

void write_plot(const CommandOptions& options, const std::string& stem, const Trajectory& traj) {
  struct Pair {
    const char* suffix;
    double PhaseState::*a;
    double PhaseState::*b;
  };
  static const Pair pairs[] = {
      {"q1_q2", &PhaseState::q1, &PhaseState::q2},
      {"t_q1", &PhaseState::t, &PhaseState::q1},
      {"t_q2", &PhaseState::t, &PhaseState::q2},
  };
  for (const Pair& p : pairs) {
    std::ofstream out = open_output(options, stem + "_" + p.suffix + ".dat");
    out << "# " << stem << ' ' << p.suffix << '\n';
    for (const PhaseState& s : traj.samples) out << format_double(s.*p.a) << ' ' << format_double(s.*p.b) << '\n';
  }
}

}  // namespace

int cmd_build_eval(const RunConfig& config, const CommandOptions& options, std::ostream& log) {
  const Model model = build_model(config);
  const GridSpec grid = lab_grid(config);
  struct Row {
    FieldValue v;
    bool singular = false;
  };
  std::vector<Row> rows(grid.size());
  parallel_for(grid.size(), options.workers, [&](std::size_t i) {
    const LabPoint p = grid.point(i);
    try {
      rows[i].v = model.field->evaluate(p.x, p.y, p.t);
    } catch (const Error&) {
      rows[i].singular = true;
    }
  });
  std::ofstream out = open_output(options, "field.csv");
  out << "x,y,t,E1,E2,B,status\n";
  std::size_t singular = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const LabPoint p = grid.point(i);
    out << format_double(p.x) << ',' << format_double(p.y) << ',' << format_double(p.t) << ',';
    if (rows[i].singular) {
      ++singular;
      out << ",,,singular\n";
    } else {
      out << format_double(rows[i].v.e1) << ',' << format_double(rows[i].v.e2) << ',' << format_double(rows[i].v.b)
          << ",ok\n";
    }
  }
  log << "build-eval: " << rows.size() << " points (" << singular << " singular) -> "
      << (fs::path(options.out_dir) / "field.csv").string() << '\n';
  return kExitOk;
}

int cmd_check(const RunConfig& config, const CommandOptions& options, std::ostream& log) {
  const Model model = build_model(config);
  CheckOptions co;
  co.determining = config.check.determining;
  co.faraday = config.check.faraday;
  co.tolerances.determining = options.tol.value_or(config.check.tol);
  co.tolerances.faraday = config.check.faraday_tol;
  co.workers = options.workers;
  const ResidualReport report = check_field(*model.field, model.params, lab_grid(config), co);
  {
    std::ofstream out = open_output(options, "residuals.csv");
    report.write_csv(out);
  }
  std::ostringstream summary;
  report.write_summary(summary);
  bool ok = report.pass();

  if (config.check.orbit) {
    const GridSpec grid = lab_grid(config);
    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> ux(grid.x.lo, grid.x.hi);
    std::uniform_real_distribution<double> uy(grid.y.lo, grid.y.hi);
    std::uniform_real_distribution<double> uv(-0.5, 0.5);
    const std::size_t n = config.check.orbit_states;
    std::vector<PhaseState> starts(n);
    for (auto& s : starts) s = {config.interval.start, ux(rng), uy(rng), uv(rng), uv(rng)};

    OrbitTestOptions oo;
    oo.epsilon = config.check.epsilon;
    oo.step = config.check.orbit_step;
    oo.span = std::min(config.check.orbit_span, config.interval.length());
    struct Outcome {
      OrbitTestResult r;
      std::string error;
    };
    std::vector<Outcome> outcomes(n);
    parallel_for(n, options.workers, [&](std::size_t i) {
      try {
        outcomes[i].r = orbit_symmetry_test(*model.field, model.params, starts[i], oo);
      } catch (const Error& e) {
        outcomes[i].error = e.what();
      }
    });

    std::ofstream out = open_output(options, "orbit.csv");
    out << "x0,y0,vx0,vy0,residual_eps,residual_half,ratio,floor,verdict\n";
    std::size_t symmetric = 0, exact = 0, broken = 0, failed = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const PhaseState& s = starts[i];
      out << format_double(s.q1) << ',' << format_double(s.q2) << ',' << format_double(s.v1) << ','
          << format_double(s.v2) << ',';
      if (!outcomes[i].error.empty()) {
        ++failed;
        out << ",,,,error\n";
        continue;
      }
      const OrbitTestResult& r = outcomes[i].r;
      const OrbitVerdict v = classify_orbit(r);
      symmetric += v == OrbitVerdict::Symmetric;
      exact += v == OrbitVerdict::Exact;
      broken += v == OrbitVerdict::Broken;
      out << format_double(r.residual_full) << ',' << format_double(r.residual_half) << ',' << format_double(r.ratio)
          << ',' << format_double(r.floor) << ',' << verdict_name(v) << '\n';
      summary << "orbit " << i << ": residual(eps)=" << format_double(r.residual_full)
              << " residual(eps/2)=" << format_double(r.residual_half) << " ratio=" << format_double(r.ratio)
              << " floor=" << format_double(r.floor) << " " << verdict_name(v) << '\n';
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (!outcomes[i].error.empty()) summary << "orbit " << i << ": error: " << outcomes[i].error << '\n';
    }
    const bool orbit_ok = broken == 0 && failed == 0;
    summary << "orbit: " << symmetric << " symmetric, " << exact << " exact, " << broken << " broken, " << failed
            << " failed " << (orbit_ok ? "PASS" : "FAIL") << '\n';
    ok = ok && orbit_ok;
  }
  summary << "overall: " << (ok ? "PASS" : "FAIL") << '\n';
  {
    std::ofstream out = open_output(options, "summary.txt");
    out << summary.str();
  }
  log << summary.str();
  return ok ? kExitOk : kExitFailure;
}

int cmd_integrate(const RunConfig& config, const CommandOptions& options, std::ostream& log) {
  const Model model = build_model(config);
  const IntegrateConfig& ic = config.integrate;
  const double start = ic.start.value_or(config.interval.start);
  const double end = ic.end.value_or(config.interval.end);
  if (!(end > start)) throw ConfigError("key 'end' must exceed 'start' in [integrate]");
  const bool want_canonical = ic.frame != IntegrateFrame::Lab;
  if (want_canonical && (config.kind != SymmetryCase::A || !model.family)) {
    throw ConfigError("canonical integration needs a case A family without [field] overrides");
  }
  const PhaseState initial{start, ic.x0, ic.y0, ic.vx0, ic.vy0};
  const IntegrateOptions io{.step = ic.step, .estimate_error = true};
  int status = kExitOk;

  std::optional<Trajectory> lab;
  if (ic.frame != IntegrateFrame::Canonical) {
    lab = integrate_lab(*model.field, initial, end, io);
    std::ofstream out = open_output(options, "lab.csv");
    write_csv(out, *lab);
    if (options.plot) write_plot(options, "lab", *lab);
    log << "lab: " << lab->samples.size() << " samples, step " << format_double(lab->info.step)
        << ", error estimate " << format_double(lab->info.error_estimate) << '\n';
    if (!lab->info.ok) {
      log << "lab integration failed: " << lab->info.failure << '\n';
      status = kExitFailure;
    }
  }

  if (want_canonical && status == kExitOk) {
    const FieldFamily& fam = *model.family;
    const CanonicalMap& map = *model.map;
    const PhaseState c0 = transform_state(initial, map, Direction::LabToCanonical);
    const double tb_end = map.quadratures(end).tbar;
    if (!(tb_end > c0.t)) throw ConfigError("canonical time must increase over the integration span");
    const Trajectory canon =
        integrate_canonical_case_a(fam.bbar(), fam.e1bar(), fam.e2bar(), config.k, c0, tb_end, io);
    {
      std::ofstream out = open_output(options, "canonical.csv");
      write_csv(out, canon);
    }
    if (options.plot) write_plot(options, "canonical", canon);
    log << "canonical: " << canon.samples.size() << " samples, step " << format_double(canon.info.step)
        << ", error estimate " << format_double(canon.info.error_estimate) << '\n';
    if (!canon.info.ok) {
      log << "canonical integration failed: " << canon.info.failure << '\n';
      status = kExitFailure;
    }

    if (lab && status == kExitOk) {
      const Trajectory mapped = transform_trajectory(*lab, map, Direction::LabToCanonical);
      const std::vector<double> dev = position_deviation(canon, mapped);
      std::ofstream out = open_output(options, "comparison.csv");
      out << "tb,xb,yb,deviation\n";
      double worst = 0.0;
      for (std::size_t i = 0; i < canon.samples.size(); ++i) {
        const PhaseState& s = canon.samples[i];
        worst = std::max(worst, dev[i]);
        out << format_double(s.t) << ',' << format_double(s.q1) << ',' << format_double(s.q2) << ','
            << format_double(dev[i]) << '\n';
      }
      log << "frame comparison: max position deviation " << format_double(worst) << '\n';
    }
  }
  return status;
}

int cmd_complete_faraday(const RunConfig& config, const CommandOptions& options, std::ostream& log) {
  const Model model = build_model(config);
  const GridAxis gx = axis_of(config.grid_xb, "xb");
  const GridAxis gy = axis_of(config.grid_yb, "yb");

  auto expr = [&](const std::string& key) {
    auto it = config.functions.find(key);
    return parse_plane(it == config.functions.end() || it->second == "faraday" ? "0" : it->second);
  };
  std::vector<std::pair<std::string, PlaneFunction>> columns;
  switch (config.kind) {
    case SymmetryCase::A: {
      Expression e1 = expr("e1bar");
      if (config.functions.contains("vbar")) e1 = potential_field(expr("vbar")).first;
      columns.emplace_back("e2bar", faraday_complete_case_a(config.k, expr("bbar"), e1));
      break;
    }
    case SymmetryCase::D:
      columns.emplace_back("bbar", faraday_complete_case_d(model.params, expr("e1bar"), expr("e2bar")));
      break;
    case SymmetryCase::B:
    case SymmetryCase::C:
      if (!model.family) throw ConfigError("complete-faraday needs the family, not a [field] replacement");
      columns.emplace_back("bbar", model.family->bbar());
      columns.emplace_back("e1bar", model.family->e1bar());
      columns.emplace_back("e2bar", model.family->e2bar());
      break;
  }

  std::ofstream out = open_output(options, "faraday.csv");
  out << "xb,yb";
  for (const auto& c : columns) out << ',' << c.first;
  out << '\n';
  for (std::size_t i = 0; i < gx.count; ++i) {
    for (std::size_t j = 0; j < gy.count; ++j) {
      const double x = gx.at(i);
      const double y = gy.at(j);
      out << format_double(x) << ',' << format_double(y);
      for (const auto& c : columns) {
        try {
          out << ',' << format_double(c.second(x, y));
        } catch (const Error&) {
          out << ",";
        }
      }
      out << '\n';
    }
  }
  std::ofstream text = open_output(options, "faraday.txt");
  for (const auto& c : columns) {
    text << c.first << " = " << c.second.description() << '\n';
    log << c.first << " = " << c.second.description() << '\n';
  }
  return kExitOk;
}

int cmd_canon(const RunConfig& config, const CommandOptions& options, const CanonOptions& canon, std::ostream& log) {
  const Model model = build_model(config);
  const CanonicalMap& map = *model.map;
  if (canon.point.has_value() == canon.trajectory.has_value()) {
    throw ConfigError("canon needs exactly one of --point or --trajectory");
  }
  if (canon.point) {
    const auto& p = *canon.point;
    if (canon.inverse) {
      const LabPoint l = map.from_canonical({p[0], p[1], p[2]});
      log << "x,y,t\n" << format_double(l.x) << ',' << format_double(l.y) << ',' << format_double(l.t) << '\n';
    } else {
      const CanonicalPoint q = map.to_canonical({p[0], p[1], p[2]});
      log << "xb,yb,tb\n" << format_double(q.xb) << ',' << format_double(q.yb) << ',' << format_double(q.tb) << '\n';
    }
    return kExitOk;
  }
  std::ifstream in(*canon.trajectory);
  if (!in) throw ConfigError("cannot open trajectory '" + *canon.trajectory + "'");
  const Trajectory traj = read_csv(in, canon.inverse ? Frame::Canonical : Frame::Lab);
  const Trajectory mapped =
      transform_trajectory(traj, map, canon.inverse ? Direction::CanonicalToLab : Direction::LabToCanonical);
  std::ofstream out = open_output(options, "transformed.csv");
  write_csv(out, mapped);
  log << "canon: " << mapped.samples.size() << " samples -> " << frame_name(mapped.frame) << " frame\n";
  return kExitOk;
}

}  // namespace lpsym::cli
