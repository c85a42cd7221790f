#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "lpsym_cli/config.hpp"

namespace lpsym::cli {

/// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;

struct CommandOptions {
  std::string out_dir = ".";
  std::optional<double> tol;  // overrides [check] tol
  unsigned workers = 1;
  std::uint64_t seed = 1;
  bool plot = false;
};

struct CanonOptions {
  std::optional<std::array<double, 3>> point;
  std::optional<std::string> trajectory;
  bool inverse = false;
};

/// Field values over the [grid] x, y, t axes -> field.csv.
int cmd_build_eval(const RunConfig& config, const CommandOptions& options, std::ostream& log);
/// Determining, Faraday and optional orbit checks -> residuals.csv,
/// summary.txt and orbit.csv.
int cmd_check(const RunConfig& config, const CommandOptions& options, std::ostream& log);
/// Trajectories -> lab.csv, canonical.csv, comparison.csv (+ plot files).
int cmd_integrate(const RunConfig& config, const CommandOptions& options, std::ostream& log);
/// Helper-completed or derived canonical free functions over the [grid]
/// xb, yb axes -> faraday.csv and faraday.txt.
int cmd_complete_faraday(const RunConfig& config, const CommandOptions& options, std::ostream& log);
/// Point or trajectory transforms between lab and canonical coordinates.
int cmd_canon(const RunConfig& config, const CommandOptions& options, const CanonOptions& canon, std::ostream& log);

}  // namespace lpsym::cli
