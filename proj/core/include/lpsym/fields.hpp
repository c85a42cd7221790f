#pragma once

// Electromagnetic fields (E1, E2, B) in the plane, and the four families of
// fields that admit a prescribed Lie point symmetry. Each family is built from
// free functions of the canonical coordinates (xb, yb).

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lpsym/canonical.hpp"
#include "lpsym/expr.hpp"

namespace lpsym {

struct FieldValue {
  double e1 = 0.0;
  double e2 = 0.0;
  double b = 0.0;
};

/// A planar field over lab coordinates. Implementations are immutable and
/// safe to evaluate concurrently.
class ElectromagneticField {
 public:
  virtual ~ElectromagneticField() = default;
  virtual FieldValue evaluate(double x, double y, double t) const = 0;
};

using FieldPtr = std::shared_ptr<const ElectromagneticField>;

/// Variable names for lab-frame field expressions.
inline const std::vector<std::string> kLabVariables = {"x", "y", "t"};
/// Variable names for free functions of the canonical coordinates.
inline const std::vector<std::string> kPlaneVariables = {"xb", "yb"};

Expression parse_lab(std::string_view src);
Expression parse_plane(std::string_view src);

/// A field given directly by three expressions over (x, y, t).
class ExpressionField final : public ElectromagneticField {
 public:
  ExpressionField(Expression e1, Expression e2, Expression b);
  FieldValue evaluate(double x, double y, double t) const override;

  const Expression& e1() const noexcept { return e1_; }
  const Expression& e2() const noexcept { return e2_; }
  const Expression& b() const noexcept { return b_; }

 private:
  Expression e1_, e2_, b_;
};

/// A field wrapping an arbitrary callable.
class CallableField final : public ElectromagneticField {
 public:
  using Fn = std::function<FieldValue(double, double, double)>;
  explicit CallableField(Fn fn) : fn_(std::move(fn)) {}
  FieldValue evaluate(double x, double y, double t) const override { return fn_(x, y, t); }

 private:
  Fn fn_;
};

/// `base` plus an additive lab-frame correction.
class SumField final : public ElectromagneticField {
 public:
  SumField(FieldPtr base, FieldPtr extra) : base_(std::move(base)), extra_(std::move(extra)) {}
  FieldValue evaluate(double x, double y, double t) const override;

 private:
  FieldPtr base_, extra_;
};

/// A scalar function of (xb, yb): either a symbolic expression or a numeric
/// evaluator (e.g. a quadrature-backed Faraday completion).
class PlaneFunction {
 public:
  /// The zero function.
  PlaneFunction();
  /// `e` must be declared over exactly (xb, yb).
  PlaneFunction(Expression e);  // NOLINT(google-explicit-constructor)
  PlaneFunction(std::function<double(double, double)> fn, std::string description);

  double operator()(double xb, double yb) const;

  /// Present when the function is symbolic.
  const std::optional<Expression>& expression() const noexcept { return expr_; }
  const std::string& description() const noexcept { return description_; }

 private:
  std::optional<Expression> expr_;
  std::function<double(double, double)> fn_;
  std::string description_;
};

/// Lab-frame field of one symmetry family, assembled from canonical free
/// functions (Bb, E1b, E2b). The family is selected by the map's case.
class FieldFamily final : public ElectromagneticField {
 public:
  FieldFamily(std::shared_ptr<const CanonicalMap> map, PlaneFunction bbar, PlaneFunction e1bar,
              PlaneFunction e2bar);

  FieldValue evaluate(double x, double y, double t) const override;

  SymmetryCase kind() const noexcept { return map_->params().kind(); }
  const SymmetryParams& params() const noexcept { return map_->params(); }
  const CanonicalMap& map() const noexcept { return *map_; }
  const std::shared_ptr<const CanonicalMap>& map_ptr() const noexcept { return map_; }

  const PlaneFunction& bbar() const noexcept { return bbar_; }
  const PlaneFunction& e1bar() const noexcept { return e1bar_; }
  const PlaneFunction& e2bar() const noexcept { return e2bar_; }

 private:
  std::shared_ptr<const CanonicalMap> map_;
  PlaneFunction bbar_, e1bar_, e2bar_;
};

/// B = (-2 Omega + Bb)/rho^2 with the matching electric field.
FieldFamily build_case_a(const SymmetryParams& params, PlaneFunction bbar, PlaneFunction e1bar,
                         PlaneFunction e2bar);

/// Rotation family from a flux function psi: E2b = psi_yb / xb^2 and
/// Bb = -psi_xb / xb, which solves Faraday's law identically.
FieldFamily build_case_b(const SymmetryParams& params, const Expression& psi, PlaneFunction e1bar);

/// Translation family from a flux function psi and a potential V:
/// Bb = psi_xb, E1b = -V_xb, E2b chosen so Faraday's law holds.
FieldFamily build_case_c(const SymmetryParams& params, const Expression& psi, const Expression& potential);

/// Dilatation family. B = -2 Omega'(t) tb + Bb.
FieldFamily build_case_d(const SymmetryParams& params, PlaneFunction bbar, PlaneFunction e1bar,
                         PlaneFunction e2bar);

/// Electric components (-V_xb, -V_yb) of a canonical potential.
std::pair<Expression, Expression> potential_field(const Expression& potential);

/// Canonical E2b that makes a case A family satisfy Faraday's law:
/// integral from 0 to xb of [E1b_yb + k (s Bb_xb + yb Bb_yb)](s, yb) ds.
PlaneFunction faraday_complete_case_a(double k, const Expression& bbar, const Expression& e1bar);

/// Canonical Bb that makes a case D family satisfy Faraday's law:
/// (1/k) times the integral from `yb0` to yb of the constraint right side.
/// `yb0` defaults to the working-interval start.
PlaneFunction faraday_complete_case_d(const SymmetryParams& params, const Expression& e1bar,
                                      const Expression& e2bar, std::optional<double> yb0 = std::nullopt);

}  // namespace lpsym
