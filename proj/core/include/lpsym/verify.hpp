#pragma once

// Numerical checks of the symmetry conditions on a field:
//   determining equations  G B + 2 rho rho' B + 2 Omega' = 0 and the two
//                          electric-field equations,
//   Faraday's law          E2_x - E1_y + B_t = 0,
//   orbit behaviour        first-order transformed orbits solve the
//                          equations of motion up to O(eps^2).

#include <iosfwd>
#include <string>
#include <vector>

#include "lpsym/dynamics.hpp"
#include "lpsym/fields.hpp"
#include "lpsym/symmetry.hpp"

namespace lpsym {

/// Central differences with step rel_step * (1 + |c|) in each coordinate c.
struct FdPolicy {
  double rel_step = 1e-5;
  double step_for(double c) const noexcept { return rel_step * (1.0 + (c < 0 ? -c : c)); }
};

struct DeterminingResidual {
  double r_b = 0.0;
  double r_e1 = 0.0;
  double r_e2 = 0.0;
  FieldValue value;
  /// 1 + |B| + |E1| + |E2| at the point.
  double scale() const noexcept;
};

DeterminingResidual determining_residual(const ElectromagneticField& field, const SymmetryParams& params, double x,
                                         double y, double t, FdPolicy fd = {});

double faraday_residual(const ElectromagneticField& field, double x, double y, double t, FdPolicy fd = {});

struct GridAxis {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t count = 1;
  /// count == 1 gives lo.
  double at(std::size_t i) const noexcept;
};

struct GridSpec {
  GridAxis x;
  GridAxis y;
  GridAxis t;
  std::size_t size() const noexcept { return x.count * y.count * t.count; }
  /// x varies slowest, t fastest.
  LabPoint point(std::size_t index) const noexcept;
};

struct ResidualTolerances {
  double determining = 1e-6;
  double faraday = 1e-7;
};

struct CheckOptions {
  bool determining = true;
  bool faraday = true;
  ResidualTolerances tolerances;
  FdPolicy fd;
  unsigned workers = 1;
};

struct ResidualRow {
  LabPoint point;
  FieldValue value;
  double r_b = 0.0;
  double r_e1 = 0.0;
  double r_e2 = 0.0;
  double r_faraday = 0.0;
  double scale = 1.0;
  bool singular = false;
  std::string note;
};

struct ResidualSummary {
  double max_scaled = 0.0;
  double rms_scaled = 0.0;
  std::size_t worst_row = 0;
};

class ResidualReport {
 public:
  GridSpec grid;
  CheckOptions options;
  std::vector<ResidualRow> rows;
  ResidualSummary b, e1, e2, faraday;
  std::size_t singular_rows = 0;

  /// Recomputes the summaries from the rows.
  void summarize();
  bool determining_pass() const noexcept;
  bool faraday_pass() const noexcept;
  /// Every requested check is within tolerance and at least one regular
  /// point was evaluated.
  bool pass() const noexcept;

  void write_csv(std::ostream& out) const;
  void write_summary(std::ostream& out) const;
};

/// Evaluates the requested residuals on every grid point. Rows come back in
/// grid order regardless of the worker count. Singular points are flagged and
/// left out of the summaries.
ResidualReport check_field(const ElectromagneticField& field, const SymmetryParams& params, const GridSpec& grid,
                           CheckOptions options = {});

struct OrbitTestOptions {
  double epsilon = 1e-3;
  double span = 1.0;
  double step = 5e-4;
  /// Spacing of the uniform re-gridding and of the 5-point stencils.
  double stencil = 5e-3;
};

struct OrbitTestResult {
  double residual_full = 0.0;  // epsilon
  double residual_half = 0.0;  // epsilon / 2
  double ratio = 0.0;          // full / half
  double floor = 0.0;          // epsilon = 0
  std::size_t evaluation_points = 0;
};

/// Max |N| over the transformed orbit, where N is the equation-of-motion
/// residual of the first-order image x + eps eta, t + eps tau of a lab orbit.
double orbit_residual(const ElectromagneticField& field, const SymmetryParams& params, const Trajectory& orbit,
                      double epsilon, double stencil);

enum class OrbitVerdict {
  Symmetric,  // residual scales as eps^2: ratio inside the band
  Exact,      // residual at eps is indistinguishable from the eps = 0 floor
  Broken,     // anything else
};

std::string_view verdict_name(OrbitVerdict v) noexcept;

/// `Exact` arises when the first-order image is already an exact solution
/// (e.g. pure translations), so there is no eps^2 term to form a ratio from.
OrbitVerdict classify_orbit(const OrbitTestResult& r, double ratio_lo = 3.5, double ratio_hi = 4.5);

OrbitTestResult orbit_symmetry_test(const ElectromagneticField& field, const SymmetryParams& params,
                                    const PhaseState& initial, OrbitTestOptions options = {});

}  // namespace lpsym
