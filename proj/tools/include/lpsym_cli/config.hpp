#pragma once

// Run configuration for the lpsym command-line tool. The text format is
// documented in docs/config-format.md.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "lpsym/fields.hpp"
#include "lpsym/symmetry.hpp"

namespace lpsym::cli {

inline constexpr int kConfigVersion = 1;

/// Invalid or incomplete configuration. The message names the offending key.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& message, std::size_t line = 0);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

struct AxisConfig {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t count = 1;
  friend bool operator==(const AxisConfig&, const AxisConfig&) = default;
};

enum class IntegrateFrame { Lab, Canonical, Both };

struct IntegrateConfig {
  double x0 = 0.0;
  double y0 = 0.0;
  double vx0 = 0.0;
  double vy0 = 0.0;
  std::optional<double> start;  // defaults to the interval start
  std::optional<double> end;    // defaults to the interval end
  double step = 1e-3;
  IntegrateFrame frame = IntegrateFrame::Lab;
  friend bool operator==(const IntegrateConfig&, const IntegrateConfig&) = default;
};

struct CheckConfig {
  double tol = 1e-6;
  double faraday_tol = 1e-7;
  bool determining = true;
  bool faraday = true;
  bool orbit = false;
  double epsilon = 1e-3;
  double orbit_span = 1.0;
  double orbit_step = 5e-4;
  std::size_t orbit_states = 10;
  friend bool operator==(const CheckConfig&, const CheckConfig&) = default;
};

struct RunConfig {
  int version = kConfigVersion;
  SymmetryCase kind = SymmetryCase::A;
  double k = 0.0;
  TimeInterval interval{};

  /// Expression text keyed by function name (rho, omega, alpha1, alpha2, a1,
  /// a2 over t; bbar, e1bar, e2bar, psi, vbar over xb, yb). The value
  /// "faraday" requests completion by the matching helper.
  std::map<std::string, std::string> functions;
  /// Optional lab-frame overrides over x, y, t: e1, e2, b replace the family,
  /// e1_add, e2_add, b_add are added to it.
  std::map<std::string, std::string> field;

  std::optional<AxisConfig> grid_x, grid_y, grid_t, grid_xb, grid_yb;
  IntegrateConfig integrate;
  CheckConfig check;

  bool operator==(const RunConfig& other) const;
};

/// Parses and validates configuration text.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

/// Normalized text form; parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& config);

/// Checks case-specific keys and that every expression parses against its
/// variable set. Throws ConfigError.
void validate(const RunConfig& config);

/// Everything a command needs, built from a validated config.
struct Model {
  SymmetryParams params;
  /// The family, absent only when a raw lab field replaces it.
  std::shared_ptr<const FieldFamily> family;
  /// The field every command evaluates (family, override or sum).
  FieldPtr field;
  /// Shared with the family when there is one.
  std::shared_ptr<const CanonicalMap> map;
};

Model build_model(const RunConfig& config);

}  // namespace lpsym::cli
