#include <cmath>
#include <numbers>

#include "doctest.h"
#include "lpsym/canonical.hpp"
#include "support/random_family.hpp"

using namespace lpsym;

namespace {

TimeFunction tf(const char* s) { return TimeFunction::parse(s); }
TimeFunction zero() { return TimeFunction::constant(0.0); }
const TimeInterval kUnit{0.0, 1.0};

double rel_err(double a, double b) { return std::abs(a - b) / (1.0 + std::abs(b)); }

}  // namespace

TEST_SUITE("symcore") {
  TEST_CASE("derived translations") {
    const auto p1 = SymmetryParams::case_a(0.0, tf("1"), zero(), tf("t"), zero(), kUnit);
    CHECK(derived_translations(p1, 0.4).first == doctest::Approx(1.0));
    const auto p2 = SymmetryParams::case_a(1.0, tf("1"), zero(), tf("1"), zero(), kUnit);
    CHECK(derived_translations(p2, 0.4).first == doctest::Approx(-1.0));
    const auto p3 = SymmetryParams::case_a(0.0, tf("exp(t)"), zero(), tf("1"), zero(), {-1.0, 1.0});
    CHECK(derived_translations(p3, 0.0).first == doctest::Approx(-1.0));
    CHECK(p3.a1()(0.0) == doctest::Approx(-1.0));
  }

  TEST_CASE("generator examples") {
    const auto a = SymmetryParams::case_a(0.0, tf("1"), zero(), zero(), zero(), kUnit);
    const auto ga = generator_eval(a, 4.0, -2.0, 0.5);
    CHECK(ga.tau == 1.0);
    CHECK(ga.eta1 == 0.0);
    CHECK(ga.eta2 == 0.0);
    const auto b = SymmetryParams::case_b(zero(), zero(), kUnit);
    const auto gb = generator_eval(b, 2.0, 3.0, 0.5);
    CHECK(gb.tau == 0.0);
    CHECK(gb.eta1 == -3.0);
    CHECK(gb.eta2 == 2.0);
    const auto d = SymmetryParams::case_d(2.0, zero(), zero(), zero(), kUnit);
    const auto gd = generator_eval(d, 1.0, -1.0, 0.5);
    CHECK(gd.tau == 0.0);
    CHECK(gd.eta1 == 2.0);
    CHECK(gd.eta2 == -2.0);
  }

  TEST_CASE("case invariants are enforced") {
    CHECK_THROWS_AS(SymmetryParams::case_a(0.0, tf("t - 0.5"), zero(), zero(), zero(), kUnit), InvalidParameters);
    CHECK_THROWS_AS(SymmetryParams::case_b(zero(), zero(), kUnit, 0.0), InvalidParameters);
    CHECK_THROWS_AS(SymmetryParams::case_c(zero(), tf("t - 0.5"), kUnit), InvalidParameters);
    CHECK_THROWS_AS(SymmetryParams::case_d(0.0, zero(), zero(), zero(), kUnit), InvalidParameters);
    CHECK_THROWS_AS(SymmetryParams::case_a(0.0, tf("1"), zero(), zero(), zero(), {1.0, 0.0}), InvalidParameters);
  }

  TEST_CASE("forward map examples") {
    const CanonicalMap ida(SymmetryParams::case_a(0.0, tf("1"), zero(), zero(), zero(), {0.0, 5.0}));
    const auto qa = ida.to_canonical({2.0, -1.0, 3.0});
    CHECK(qa.xb == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(qa.yb == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(qa.tb == doctest::Approx(3.0).epsilon(1e-12));

    const double e = std::numbers::e;
    const CanonicalMap dil(SymmetryParams::case_d(1.0, zero(), zero(), zero(), {0.0, 10.0}));
    const auto qd = dil.to_canonical({e, 0.0, 7.0});
    CHECK(std::abs(qd.xb) < 1e-14);
    CHECK(qd.yb == doctest::Approx(7.0));
    CHECK(qd.tb == doctest::Approx(1.0).epsilon(1e-14));
    const auto pd = dil.from_canonical({0.0, 7.0, 1.0});
    CHECK(pd.x == doctest::Approx(e).epsilon(1e-14));
    CHECK(std::abs(pd.y) < 1e-14);
    CHECK(pd.t == doctest::Approx(7.0));

    const CanonicalMap rot(SymmetryParams::case_b(zero(), zero(), {0.0, 10.0}));
    const auto qb = rot.to_canonical({0.0, 2.0, 5.0});
    CHECK(qb.xb == doctest::Approx(2.0));
    CHECK(qb.yb == doctest::Approx(5.0));
    CHECK(qb.tb == doctest::Approx(std::numbers::pi / 2));

    const CanonicalMap tr(SymmetryParams::case_c(zero(), tf("1"), {0.0, 10.0}));
    const auto pc = tr.from_canonical({4.0, 2.0, 3.0});
    CHECK(pc.x == doctest::Approx(4.0));
    CHECK(pc.y == doctest::Approx(3.0));
    CHECK(pc.t == doctest::Approx(2.0));
  }

  TEST_CASE("singular centers are guarded") {
    const CanonicalMap rot(SymmetryParams::case_b(zero(), zero(), kUnit));
    CHECK_THROWS_AS((void)rot.to_canonical({0.0, 0.0, 0.5}), SingularPointError);
    const CanonicalMap dil(SymmetryParams::case_d(1.0, zero(), zero(), zero(), kUnit));
    CHECK_THROWS_AS((void)dil.to_canonical({0.0, 0.0, 0.5}), SingularPointError);
  }

  TEST_CASE("case A with rho only reduces to the quadrature of 1/rho^2") {
    const auto p = SymmetryParams::case_a(0.0, tf("1 + 0.5*t"), zero(), zero(), zero(), kUnit);
    const CanonicalMap map(p);
    const double t = 0.8;
    const double rho = 1.0 + 0.5 * t;
    const auto q = map.to_canonical({0.3, -0.7, t});
    // Integral of 1/(1 + t/2)^2 from 0 is 2 - 2/(1 + t/2).
    CHECK(q.tb == doctest::Approx(2.0 - 2.0 / rho).epsilon(1e-10));
    CHECK(q.xb == doctest::Approx(0.3 / rho).epsilon(1e-10));
    CHECK(q.yb == doctest::Approx(-0.7 / rho).epsilon(1e-10));
  }

  TEST_CASE("defining residual examples") {
    const double e = std::numbers::e;
    const CanonicalMap dil(SymmetryParams::case_d(1.0, zero(), zero(), zero(), {0.0, 10.0}));
    for (double r : canonical_defining_residual(dil, {e, 0.0, 7.0})) CHECK(std::abs(r) < 1e-7);
    const CanonicalMap rot(SymmetryParams::case_b(zero(), zero(), kUnit));
    for (double r : canonical_defining_residual(rot, {1.0, 1.0, 0.0})) CHECK(std::abs(r) < 1e-7);
    const CanonicalMap ida(SymmetryParams::case_a(0.0, tf("1"), zero(), zero(), zero(), kUnit));
    for (double r : canonical_defining_residual(ida, {0.4, -0.2, 0.5})) CHECK(std::abs(r) < 1e-9);
  }

  TEST_CASE("defining property holds for random parameters on a 5x5x5 grid") {
    for (auto kind : {SymmetryCase::A, SymmetryCase::B, SymmetryCase::C, SymmetryCase::D}) {
      for (std::uint64_t seed = 1; seed <= 2; ++seed) {
        const auto fam = testing::random_family(kind, seed);
        INFO(fam.description);
        const CanonicalMap& map = fam.family->map();
        double worst = 0.0;
        for (int i = 0; i < 5; ++i)
          for (int j = 0; j < 5; ++j)
            for (int l = 0; l < 5; ++l) {
              const LabPoint p{-1.3 + 0.65 * i, -1.25 + 0.65 * j, 0.1 + 0.2 * l};
              const auto q = map.to_canonical(p);
              const auto r = canonical_defining_residual(map, p);
              worst = std::max({worst, std::abs(r[0]) / (1 + std::abs(q.xb)), std::abs(r[1]) / (1 + std::abs(q.yb)),
                                std::abs(r[2]) / (1 + std::abs(q.tb))});
            }
        CHECK(worst <= 1e-6);
      }
    }
  }

  TEST_CASE("round trips are identity for all cases") {
    testing::Rng rng(5);
    for (auto kind : {SymmetryCase::A, SymmetryCase::B, SymmetryCase::C, SymmetryCase::D}) {
      const auto fam = testing::random_family(kind, 3);
      INFO(fam.description);
      const CanonicalMap& map = fam.family->map();
      for (int i = 0; i < 20; ++i) {
        const LabPoint p = testing::random_point(rng);
        const auto q = map.to_canonical(p);
        const auto back = map.from_canonical(q);
        CHECK(rel_err(back.x, p.x) <= 1e-8);
        CHECK(rel_err(back.y, p.y) <= 1e-8);
        CHECK(rel_err(back.t, p.t) <= 1e-8);
        const auto again = map.to_canonical(back, q);
        CHECK(rel_err(again.xb, q.xb) <= 1e-8);
        CHECK(rel_err(again.yb, q.yb) <= 1e-8);
        CHECK(rel_err(again.tb, q.tb) <= 1e-8);
      }
    }
  }

  TEST_CASE("analytic jacobian matches finite differences") {
    testing::Rng rng(11);
    for (auto kind : {SymmetryCase::A, SymmetryCase::B, SymmetryCase::C, SymmetryCase::D}) {
      const auto fam = testing::random_family(kind, 4);
      const CanonicalMap& map = fam.family->map();
      const LabPoint p = testing::random_point(rng);
      const Jacobian j = map.jacobian(p);
      const double h = 1e-6;
      for (int c = 0; c < 3; ++c) {
        LabPoint lo = p, hi = p;
        (c == 0 ? lo.x : c == 1 ? lo.y : lo.t) -= h;
        (c == 0 ? hi.x : c == 1 ? hi.y : hi.t) += h;
        const auto q0 = map.to_canonical(p);
        const auto ql = map.to_canonical(lo, q0);
        const auto qh = map.to_canonical(hi, q0);
        CHECK(j[0][c] == doctest::Approx((qh.xb - ql.xb) / (2 * h)).epsilon(1e-6));
        CHECK(j[1][c] == doctest::Approx((qh.yb - ql.yb) / (2 * h)).epsilon(1e-6));
        CHECK(j[2][c] == doctest::Approx((qh.tb - ql.tb) / (2 * h)).epsilon(1e-6));
      }
    }
  }

  TEST_CASE("nearest branch") {
    const double pi = std::numbers::pi;
    CHECK(nearest_branch(0.1, 2 * pi) == doctest::Approx(0.1 + 2 * pi));
    CHECK(nearest_branch(3.0, -3.0) == doctest::Approx(3.0 - 2 * pi));
    CHECK(nearest_branch(1.0, 1.2) == 1.0);
  }

  TEST_CASE("time function derivatives") {
    const TimeFunction f = tf("sin(2*t)");
    CHECK(f.derivative(3, 0.3) == doctest::Approx(-8 * std::cos(0.6)));
    CHECK(TimeFunction::constant(2.0).is_constant());
    CHECK_THROWS_AS(TimeFunction::parse("x"), UndeclaredIdentifier);
  }
}
