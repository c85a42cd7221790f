#pragma once

// Canonical group coordinates (xb, yb, tb) in which the symmetry generator
// acts as d/dtb, i.e. G xb = 0, G yb = 0, G tb = 1.

#include <array>
#include <memory>

#include "lpsym/quadrature.hpp"
#include "lpsym/symmetry.hpp"

namespace lpsym {

struct LabPoint {
  double x = 0.0;
  double y = 0.0;
  double t = 0.0;
};

struct CanonicalPoint {
  double xb = 0.0;
  double yb = 0.0;
  double tb = 0.0;
};

/// Rows (xb, yb, tb), columns (x, y, t).
using Jacobian = std::array<std::array<double, 3>, 3>;

/// Case A time quadratures at one instant: tbar, T, delta1, delta2 and their
/// exact time derivatives.
struct QuadratureState {
  double tbar = 0.0;
  double rotation = 0.0;  // T(t)
  double delta1 = 0.0;
  double delta2 = 0.0;
  double tbar_rate = 0.0;
  double rotation_rate = 0.0;
  double delta1_rate = 0.0;
  double delta2_rate = 0.0;
};

/// Tabulation settings for the case A quadratures. Indefinite integrals take
/// the working-interval start as lower limit; the table extends `pad_nodes`
/// nodes beyond each end of the interval.
struct QuadratureGrid {
  std::size_t nodes = 2048;
  std::size_t pad_nodes = 16;
};

class CanonicalMap {
 public:
  explicit CanonicalMap(SymmetryParams params, QuadratureGrid grid = {});

  const SymmetryParams& params() const noexcept { return *params_; }

  CanonicalPoint to_canonical(const LabPoint& p) const;
  /// Same, choosing the angle branch nearest to the one of `previous`.
  CanonicalPoint to_canonical(const LabPoint& p, const CanonicalPoint& previous) const;

  LabPoint from_canonical(const CanonicalPoint& q) const;

  /// Analytic partial derivatives of (xb, yb, tb) with respect to (x, y, t).
  Jacobian jacobian(const LabPoint& p) const;

  /// Case A only.
  QuadratureState quadratures(double t) const;

  /// Time range over which the map is defined (the padded table range in
  /// case A, unbounded otherwise).
  std::pair<double, double> time_domain() const;

 private:
  struct Tables;
  CanonicalPoint forward(const LabPoint& p, const double* angle_reference) const;
  double invert_tbar(double tbar) const;

  std::shared_ptr<const SymmetryParams> params_;
  std::shared_ptr<const Tables> tables_;
};

/// (G xb, G yb, G tb - 1) with G applied by central differences of the map.
std::array<double, 3> canonical_defining_residual(const CanonicalMap& map, const LabPoint& p);

/// Shifts `angle` by multiples of 2 pi to the branch nearest `reference`.
double nearest_branch(double angle, double reference) noexcept;

}  // namespace lpsym
