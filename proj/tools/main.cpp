// lpsym: build, check, integrate and transform symmetric planar fields.

#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "lpsym_cli/commands.hpp"

namespace {

std::array<double, 3> parse_triple(const std::string& text) {
  std::array<double, 3> v{};
  std::istringstream in(text);
  in.imbue(std::locale::classic());
  char c1 = 0, c2 = 0;
  if (!(in >> v[0] >> c1 >> v[1] >> c2 >> v[2]) || c1 != ',' || c2 != ',' || !(in >> std::ws).eof()) {
    throw lpsym::cli::ConfigError("--point expects 'a,b,c', got '" + text + "'");
  }
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace lpsym::cli;

  CLI::App app{"Lie point symmetric fields for planar charged-particle motion"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  CommandOptions options;
  const unsigned hw = std::thread::hardware_concurrency();
  options.workers = hw ? hw : 1;
  double tol = 0.0;

  app.add_option("--config", config_path, "Run configuration file")->required();
  app.add_option("--out", options.out_dir, "Output directory")->capture_default_str();
  auto* tol_opt = app.add_option("--tol", tol, "Determining-equation tolerance (overrides [check] tol)");
  app.add_option("--workers", options.workers, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--seed", options.seed, "Seed for randomized orbit states")->capture_default_str();

  auto* build = app.add_subcommand("build-eval", "Evaluate the field on the [grid] x, y, t axes");
  auto* check = app.add_subcommand("check", "Verify determining equations, Faraday's law and orbits");
  auto* integrate = app.add_subcommand("integrate", "Integrate a trajectory");
  integrate->add_flag("--plot", options.plot, "Also write two-column plot files");
  auto* faraday = app.add_subcommand("complete-faraday", "Tabulate helper-completed canonical functions");
  auto* canon = app.add_subcommand("canon", "Transform a point or trajectory");
  CanonOptions canon_options;
  std::string point_text;
  std::string trajectory_path;
  auto* point_opt = canon->add_option("--point", point_text, "x,y,t (or xb,yb,tb with --inverse)");
  auto* traj_opt = canon->add_option("--trajectory", trajectory_path, "Trajectory CSV to transform");
  point_opt->excludes(traj_opt);
  canon->add_flag("--inverse", canon_options.inverse, "Map canonical to lab instead");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }
  if (*tol_opt) {
    if (!(tol > 0.0)) {
      std::cerr << "error: --tol must be positive\n";
      return kExitConfig;
    }
    options.tol = tol;
  }

  try {
    const RunConfig config = load_config(config_path);
    if (*build) return cmd_build_eval(config, options, std::cout);
    if (*check) return cmd_check(config, options, std::cout);
    if (*integrate) return cmd_integrate(config, options, std::cout);
    if (*faraday) return cmd_complete_faraday(config, options, std::cout);
    if (*canon) {
      if (*point_opt) canon_options.point = parse_triple(point_text);
      if (*traj_opt) canon_options.trajectory = trajectory_path;
      return cmd_canon(config, options, canon_options, std::cout);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const lpsym::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitConfig;
}
