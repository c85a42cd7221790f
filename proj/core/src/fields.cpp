#include "lpsym/fields.hpp"

#include <array>
#include <charconv>
#include <cmath>

#include "lpsym/quadrature.hpp"

namespace lpsym {

Expression parse_lab(std::string_view src) { return parse(src, kLabVariables); }
Expression parse_plane(std::string_view src) { return parse(src, kPlaneVariables); }

namespace {

void require_vars(const Expression& e, const std::vector<std::string>& vars, const char* what) {
  if (e.varnames() != vars) {
    std::string want;
    for (const auto& v : vars) want += (want.empty() ? "" : ", ") + v;
    throw Error(std::string(what) + " must be declared over (" + want + ")");
  }
}

std::string shortest(double v) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

// A time expression moved onto (xb, yb) with t -> yb.
Expression time_as_yb(const TimeFunction& f, int order) {
  const std::array<std::size_t, 1> index{1};
  return rebind(f.expr(order), kPlaneVariables, index);
}

}  // namespace

ExpressionField::ExpressionField(Expression e1, Expression e2, Expression b)
    : e1_(std::move(e1)), e2_(std::move(e2)), b_(std::move(b)) {
  require_vars(e1_, kLabVariables, "E1");
  require_vars(e2_, kLabVariables, "E2");
  require_vars(b_, kLabVariables, "B");
}

FieldValue ExpressionField::evaluate(double x, double y, double t) const {
  const std::array<double, 3> v{x, y, t};
  return {e1_.eval(v), e2_.eval(v), b_.eval(v)};
}

FieldValue SumField::evaluate(double x, double y, double t) const {
  const FieldValue a = base_->evaluate(x, y, t);
  const FieldValue b = extra_->evaluate(x, y, t);
  return {a.e1 + b.e1, a.e2 + b.e2, a.b + b.b};
}

PlaneFunction::PlaneFunction() : PlaneFunction(Expression::constant(0.0, kPlaneVariables)) {}

PlaneFunction::PlaneFunction(Expression e) : expr_(std::move(e)) {
  require_vars(*expr_, kPlaneVariables, "canonical free function");
  description_ = expr_->str();
}

PlaneFunction::PlaneFunction(std::function<double(double, double)> fn, std::string description)
    : fn_(std::move(fn)), description_(std::move(description)) {
  if (!fn_) throw Error("empty plane function");
}

double PlaneFunction::operator()(double xb, double yb) const {
  if (expr_) {
    const std::array<double, 2> v{xb, yb};
    return expr_->eval(v);
  }
  return fn_(xb, yb);
}

FieldFamily::FieldFamily(std::shared_ptr<const CanonicalMap> map, PlaneFunction bbar, PlaneFunction e1bar,
                         PlaneFunction e2bar)
    : map_(std::move(map)), bbar_(std::move(bbar)), e1bar_(std::move(e1bar)), e2bar_(std::move(e2bar)) {
  if (!map_) throw Error("field family needs a canonical map");
}

FieldValue FieldFamily::evaluate(double x, double y, double t) const {
  const SymmetryParams& p = map_->params();
  const CanonicalPoint q = map_->to_canonical({x, y, t});
  const double bb = bbar_(q.xb, q.yb);
  const double e1b = e1bar_(q.xb, q.yb);
  const double e2b = e2bar_(q.xb, q.yb);

  switch (p.kind()) {
    case SymmetryCase::A: {
      const QuadratureState s = map_->quadratures(t);
      const double k = p.k();
      const double r = p.rho()(t);
      const double rd = p.rho().derivative(1, t);
      const double rdd = p.rho().derivative(2, t);
      const double om = p.omega()(t);
      const double omd = p.omega().derivative(1, t);
      const double al1 = p.alpha1()(t);
      const double al2 = p.alpha2()(t);
      const double al1d = p.alpha1().derivative(1, t);
      const double al2d = p.alpha2().derivative(1, t);
      const double al1dd = p.alpha1().derivative(2, t);
      const double al2dd = p.alpha2().derivative(2, t);
      const double c = std::cos(s.rotation);
      const double sn = std::sin(s.rotation);
      const double ekt = std::exp(k * s.tbar);
      const double d1 = s.delta1;
      const double d2 = s.delta2;
      const double r2 = r * r;
      const double r3 = r2 * r;
      const double r4 = r2 * r2;
      const double swirl = r * omd - 2.0 * rd * om;

      const double e1 = al1dd + (rdd / r) * (x - al1) + om * om * x / r4 - swirl * y / r3 +
                        (om / r3) * (r * al2d - rd * al2) + (k * k * ekt / r3) * (d2 * sn - d1 * c) -
                        k * om * al2 / r4 + (ekt / r3) * (e1b * c - e2b * sn) -
                        (r * rd * (y - al2) + r2 * al2d + om * x - k * r * ekt * (d2 * c + d1 * sn)) * bb / r4;
      const double e2 = al2dd + (rdd / r) * (y - al2) + om * om * y / r4 + swirl * x / r3 -
                        (om / r3) * (r * al1d - rd * al1) - (k * k * ekt / r3) * (d2 * c + d1 * sn) +
                        k * om * al1 / r4 + (ekt / r3) * (e2b * c + e1b * sn) +
                        (r * rd * (x - al1) + r2 * al1d - om * y - k * r * ekt * (d1 * c - d2 * sn)) * bb / r4;
      return {e1, e2, (bb - 2.0 * om) / r2};
    }
    case SymmetryCase::B: {
      const double dx = x - p.center1()(t);
      const double dy = y - p.center2()(t);
      const double c1d = p.center1().derivative(1, t);
      const double c2d = p.center2().derivative(1, t);
      const double c1dd = p.center1().derivative(2, t);
      const double c2dd = p.center2().derivative(2, t);
      return {c1dd - c2d * bb + dx * e1b - dy * e2b, c2dd + c1d * bb + dx * e2b + dy * e1b, bb};
    }
    case SymmetryCase::C: {
      const double a2 = p.a2()(t);
      const double a1d = p.a1().derivative(1, t);
      const double a2d = p.a2().derivative(1, t);
      const double a1dd = p.a1().derivative(2, t);
      const double a2dd = p.a2().derivative(2, t);
      const double ya = y / a2;
      return {a1dd * ya - a2d * ya * bb + e1b, a2dd * ya + a1d * ya * bb + e2b, bb};
    }
    case SymmetryCase::D: {
      const double k = p.k();
      const double tb = q.tb;
      const double om = p.omega()(t);
      const double omd = p.omega().derivative(1, t);
      const double omdd = p.omega().derivative(2, t);
      const double dx = x - p.center1()(t);
      const double dy = y - p.center2()(t);
      const double g1d = p.center1().derivative(1, t);
      const double g2d = p.center2().derivative(1, t);
      const double g1dd = p.center1().derivative(2, t);
      const double g2dd = p.center2().derivative(2, t);
      const double c = std::cos(om * tb);
      const double sn = std::sin(om * tb);
      const double ekt = std::exp(k * tb);
      const double shear = omd * tb * (omd * tb - bb);
      const double e1 = g1dd + 2.0 * omd * g2d * tb - g2d * bb + shear * dx - omdd * tb * dy +
                        ekt * (e1b * c - e2b * sn);
      const double e2 = g2dd - 2.0 * omd * g1d * tb + g1d * bb + shear * dy + omdd * tb * dx +
                        ekt * (e1b * sn + e2b * c);
      return {e1, e2, -2.0 * omd * tb + bb};
    }
  }
  return {};
}

namespace {

FieldFamily assemble(const SymmetryParams& params, SymmetryCase expected, PlaneFunction bbar, PlaneFunction e1bar,
                     PlaneFunction e2bar) {
  if (params.kind() != expected) {
    throw InvalidParameters(std::string("expected case ") + case_letter(expected) + " parameters, got case " +
                            case_letter(params.kind()));
  }
  return FieldFamily(std::make_shared<const CanonicalMap>(params), std::move(bbar), std::move(e1bar),
                     std::move(e2bar));
}

}  // namespace

FieldFamily build_case_a(const SymmetryParams& params, PlaneFunction bbar, PlaneFunction e1bar,
                         PlaneFunction e2bar) {
  return assemble(params, SymmetryCase::A, std::move(bbar), std::move(e1bar), std::move(e2bar));
}

FieldFamily build_case_b(const SymmetryParams& params, const Expression& psi, PlaneFunction e1bar) {
  require_vars(psi, kPlaneVariables, "psi");
  const Expression xb = Expression::variable("xb", kPlaneVariables);
  Expression bbar = -derive(psi, "xb") / xb;
  Expression e2bar = derive(psi, "yb") / pow(xb, 2.0);
  return assemble(params, SymmetryCase::B, std::move(bbar), std::move(e1bar), std::move(e2bar));
}

FieldFamily build_case_c(const SymmetryParams& params, const Expression& psi, const Expression& potential) {
  require_vars(psi, kPlaneVariables, "psi");
  require_vars(potential, kPlaneVariables, "potential");
  if (params.kind() != SymmetryCase::C) throw InvalidParameters("expected case C parameters");
  const Expression xb = Expression::variable("xb", kPlaneVariables);
  const Expression a1 = time_as_yb(params.a1(), 0);
  const Expression a2 = time_as_yb(params.a2(), 0);
  const Expression a2d = time_as_yb(params.a2(), 1);
  const Expression a1dd = time_as_yb(params.a1(), 2);
  const Expression v_x = derive(potential, "xb");
  Expression bbar = derive(psi, "xb");
  Expression e1bar = -v_x;
  Expression e2bar = (a1dd / a2) * xb - (a2d / a2) * psi - derive(psi, "yb") + (a1 / a2) * v_x;
  return assemble(params, SymmetryCase::C, std::move(bbar), std::move(e1bar), std::move(e2bar));
}

FieldFamily build_case_d(const SymmetryParams& params, PlaneFunction bbar, PlaneFunction e1bar,
                         PlaneFunction e2bar) {
  return assemble(params, SymmetryCase::D, std::move(bbar), std::move(e1bar), std::move(e2bar));
}

std::pair<Expression, Expression> potential_field(const Expression& potential) {
  require_vars(potential, kPlaneVariables, "potential");
  return {-derive(potential, "xb"), -derive(potential, "yb")};
}

PlaneFunction faraday_complete_case_a(double k, const Expression& bbar, const Expression& e1bar) {
  require_vars(bbar, kPlaneVariables, "Bb");
  require_vars(e1bar, kPlaneVariables, "E1b");
  const Expression xb = Expression::variable("xb", kPlaneVariables);
  const Expression yb = Expression::variable("yb", kPlaneVariables);
  const Expression integrand =
      derive(e1bar, "yb") + k * (xb * derive(bbar, "xb") + yb * derive(bbar, "yb"));
  auto fn = [integrand](double x, double y) {
    const ScalarFn f = [&](double s) {
      const std::array<double, 2> v{s, y};
      return integrand.eval(v);
    };
    return gauss_legendre(f, 0.0, x, panels_for_length(x));
  };
  return PlaneFunction(std::move(fn), "integral from 0 to xb of (" + integrand.str() + ")");
}

PlaneFunction faraday_complete_case_d(const SymmetryParams& params, const Expression& e1bar,
                                      const Expression& e2bar, std::optional<double> yb0) {
  if (params.kind() != SymmetryCase::D) throw InvalidParameters("expected case D parameters");
  require_vars(e1bar, kPlaneVariables, "E1b");
  require_vars(e2bar, kPlaneVariables, "E2b");
  const double k = params.k();
  const Expression xb = Expression::variable("xb", kPlaneVariables);
  const Expression om = time_as_yb(params.omega(), 0);
  const Expression omdd = time_as_yb(params.omega(), 2);
  const Expression s = apply(Fn::Sin, xb);
  const Expression c = apply(Fn::Cos, xb);
  const Expression rhs = -omdd + (k * s - om * c) * e1bar - (k * c + om * s) * e2bar +
                         (k * c - om * s) * derive(e1bar, "xb") + (k * s + om * c) * derive(e2bar, "xb");
  const double lower = yb0.value_or(params.interval().start);
  auto fn = [rhs, k, lower](double x, double y) {
    const ScalarFn f = [&](double u) {
      const std::array<double, 2> v{x, u};
      return rhs.eval(v);
    };
    return gauss_legendre(f, lower, y, panels_for_length(y - lower)) / k;
  };
  return PlaneFunction(std::move(fn), "(1/" + shortest(k) + ") * integral from " + shortest(lower) +
                                          " to yb of (" + rhs.str() + ")");
}

}  // namespace lpsym
