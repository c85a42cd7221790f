#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "lpsym/dynamics.hpp"
#include "support/random_family.hpp"

using namespace lpsym;

namespace {

const double kPi = std::numbers::pi;

ExpressionField uniform_b(double b) { return {parse_lab("0"), parse_lab("0"), parse_lab(std::to_string(b))}; }

TimeFunction tf(const char* s) { return TimeFunction::parse(s); }
TimeFunction zero() { return TimeFunction::constant(0.0); }

double gyro_error(double step) {
  const auto traj = integrate_lab(uniform_b(1.0), {0.0, 0.0, 0.0, 1.0, 0.0}, 2 * kPi, {step, false});
  double worst = 0.0;
  for (const auto& s : traj.samples)
    worst = std::max(worst, std::hypot(s.q1 - std::sin(s.t), s.q2 - (std::cos(s.t) - 1.0)));
  return worst;
}

}  // namespace

TEST_SUITE("dynamics") {
  TEST_CASE("gyro orbit oracle") {
    const auto traj = integrate_lab(uniform_b(1.0), {0.0, 0.0, 0.0, 1.0, 0.0}, kPi / 2);
    REQUIRE(traj.info.ok);
    const auto& end = traj.samples.back();
    CHECK(end.t == doctest::Approx(kPi / 2).epsilon(1e-15));
    CHECK(std::abs(end.q1 - 1.0) < 1e-8);
    CHECK(std::abs(end.q2 + 1.0) < 1e-8);
    CHECK(gyro_error(1e-3) <= 1e-8);
    CHECK(traj.info.error_estimate >= 0.0);
    CHECK(traj.info.error_estimate < 1e-8);
  }

  TEST_CASE("rk4 is fourth order") {
    const double ratio = gyro_error(2e-2) / gyro_error(1e-2);
    CHECK(ratio >= 12.0);
    CHECK(ratio <= 20.0);
  }

  TEST_CASE("uniform electric field and free motion") {
    const ExpressionField push(parse_lab("1"), parse_lab("0"), parse_lab("0"));
    const auto a = integrate_lab(push, {0.0, 0.0, 0.0, 0.0, 0.0}, 2.0);
    CHECK(std::abs(a.samples.back().q1 - 2.0) <= 1e-10);
    CHECK(std::abs(a.samples.back().q2) <= 1e-10);
    const ExpressionField none(parse_lab("0"), parse_lab("0"), parse_lab("0"));
    const auto b = integrate_lab(none, {0.0, 0.0, 0.0, 1.0, 1.0}, 3.0);
    CHECK(b.samples.back().q1 == doctest::Approx(3.0).epsilon(1e-13));
    CHECK(b.samples.back().q2 == doctest::Approx(3.0).epsilon(1e-13));
    CHECK(b.samples.size() == 3001);
  }

  TEST_CASE("speed is conserved in a uniform magnetic field") {
    const auto traj = integrate_lab(uniform_b(1.0), {0.0, 0.3, -0.2, 0.6, 0.8}, 20 * kPi, {1e-3, false});
    double worst = 0.0;
    for (const auto& s : traj.samples) worst = std::max(worst, std::abs(std::hypot(s.v1, s.v2) - 1.0));
    CHECK(worst <= 1e-9);
  }

  TEST_CASE("canonical oracles") {
    const auto damped = integrate_canonical_case_a(PlaneFunction(), PlaneFunction(), PlaneFunction(), 1.0,
                                                   {0.0, 1.0, 0.0, 0.0, 0.0}, 1.0);
    CHECK(std::abs(damped.samples.back().q1 - 2.0 / std::numbers::e) <= 1e-8);
    CHECK(damped.frame == Frame::Canonical);

    const auto gyro = integrate_canonical_case_a(parse_plane("1"), PlaneFunction(), PlaneFunction(), 0.0,
                                                 {0.0, 0.0, 0.0, 1.0, 0.0}, 2 * kPi);
    CHECK(std::abs(gyro.samples.back().q1) < 1e-8);
    CHECK(std::abs(gyro.samples.back().q2) < 1e-8);

    const auto free = integrate_canonical_case_a(PlaneFunction(), PlaneFunction(), PlaneFunction(), 0.0,
                                                 {0.0, 1.0, 2.0, -1.0, 0.5}, 2.0);
    CHECK(free.samples.back().q1 == doctest::Approx(-1.0));
    CHECK(free.samples.back().q2 == doctest::Approx(3.0));
  }

  TEST_CASE("singular field stops the integration with a partial trajectory") {
    const ExpressionField f(parse_lab("1/(1 - t)"), parse_lab("0"), parse_lab("0"));
    const auto traj = integrate_lab(f, {0.0, 0.0, 0.0, 0.0, 0.0}, 2.0, {1e-2, false});
    CHECK_FALSE(traj.info.ok);
    CHECK(traj.info.failure.find("last good time") != std::string::npos);
    CHECK(traj.samples.back().t < 1.0);
    CHECK(traj.samples.size() >= 2);
  }

  TEST_CASE("identity transform leaves trajectories untouched") {
    const CanonicalMap id(SymmetryParams::case_a(0.0, tf("1"), zero(), zero(), zero(), {0.0, 2.0}));
    const auto traj = integrate_lab(uniform_b(1.0), {0.0, 0.1, 0.2, 0.3, 0.4}, 1.5, {1e-2, false});
    const auto can = transform_trajectory(traj, id, Direction::LabToCanonical);
    REQUIRE(can.samples.size() == traj.samples.size());
    for (std::size_t i = 0; i < traj.samples.size(); ++i) {
      CHECK(std::abs(can.samples[i].t - traj.samples[i].t) <= 1e-12);
      CHECK(std::abs(can.samples[i].q1 - traj.samples[i].q1) <= 1e-12);
      CHECK(std::abs(can.samples[i].v2 - traj.samples[i].v2) <= 1e-12);
    }
  }

  TEST_CASE("round trips through every frame") {
    for (auto kind : {SymmetryCase::A, SymmetryCase::B, SymmetryCase::C, SymmetryCase::D}) {
      const auto fam = testing::random_family(kind, 5);
      INFO(fam.description);
      const auto traj = integrate_lab(*fam.family, {0.1, 0.8, -0.6, 0.3, 0.2}, 0.6, {1e-3, false});
      REQUIRE(traj.info.ok);
      if (kind != SymmetryCase::A) {
        // Only case A time is monotone along every orbit; the other cases
        // map state by state.
        const CanonicalMap& map = fam.family->map();
        CanonicalPoint prev = map.to_canonical({traj.samples[0].q1, traj.samples[0].q2, traj.samples[0].t});
        for (std::size_t i = 0; i < traj.samples.size(); i += 50) {
          const PhaseState& s = traj.samples[i];
          const PhaseState c = transform_state(s, map, Direction::LabToCanonical, &prev);
          prev = {c.q1, c.q2, c.t};
          const PhaseState back = transform_state(c, map, Direction::CanonicalToLab);
          CHECK(std::abs(back.t - s.t) <= 1e-8);
          CHECK(std::abs(back.q1 - s.q1) <= 1e-8);
          CHECK(std::abs(back.q2 - s.q2) <= 1e-8);
          CHECK(std::abs(back.v1 - s.v1) <= 1e-8);
          CHECK(std::abs(back.v2 - s.v2) <= 1e-8);
        }
        continue;
      }
      const auto can = transform_trajectory(traj, fam.family->map(), Direction::LabToCanonical);
      const auto lab = transform_trajectory(can, fam.family->map(), Direction::CanonicalToLab);
      for (std::size_t i = 0; i < traj.samples.size(); i += 50) {
        CHECK(std::abs(lab.samples[i].t - traj.samples[i].t) <= 1e-8);
        CHECK(std::abs(lab.samples[i].q1 - traj.samples[i].q1) <= 1e-8);
        CHECK(std::abs(lab.samples[i].q2 - traj.samples[i].q2) <= 1e-8);
        CHECK(std::abs(lab.samples[i].v1 - traj.samples[i].v1) <= 1e-8);
        CHECK(std::abs(lab.samples[i].v2 - traj.samples[i].v2) <= 1e-8);
      }
    }
  }

  TEST_CASE("case A lab and canonical integrations agree") {
    const auto fam = testing::random_family(SymmetryCase::A, 2);
    const FieldFamily& f = *fam.family;
    const PhaseState start{0.0, 0.7, -0.2, 0.1, 0.3};
    const PhaseState cstart = transform_state(start, f.map(), Direction::LabToCanonical);
    const double tb_end = f.map().to_canonical({0.0, 0.0, 0.8}).tb;
    const auto direct = integrate_canonical_case_a(f.bbar(), f.e1bar(), f.e2bar(), f.params().k(), cstart, tb_end);
    const auto lab = integrate_lab(f, start, 0.8);
    const auto mapped = transform_trajectory(lab, f.map(), Direction::LabToCanonical);
    const auto dev = position_deviation(direct, mapped);
    CHECK(*std::max_element(dev.begin(), dev.end()) <= 1e-6);
  }

  TEST_CASE("csv round trip") {
    const auto traj = integrate_lab(uniform_b(1.0), {0.0, 0.1, 0.2, 0.3, 0.4}, 0.5, {1e-1, false});
    std::ostringstream out;
    write_csv(out, traj);
    CHECK(out.str().rfind("t,q1,q2,v1,v2\n", 0) == 0);
    std::istringstream in(out.str());
    const auto back = read_csv(in, Frame::Lab);
    REQUIRE(back.samples.size() == traj.samples.size());
    for (std::size_t i = 0; i < traj.samples.size(); ++i) {
      CHECK(back.samples[i].t == traj.samples[i].t);
      CHECK(back.samples[i].q1 == traj.samples[i].q1);
      CHECK(back.samples[i].v2 == traj.samples[i].v2);
    }
    std::istringstream bad("t,q1,q2,v1,v2\n0,1,2,3\n");
    CHECK_THROWS_AS((void)read_csv(bad, Frame::Lab), Error);
    CHECK(format_double(0.1) == "0.10000000000000001");
  }

  TEST_CASE("trajectory validation") {
    Trajectory t;
    t.samples = {{0.0, 0, 0, 0, 0}};
    CHECK_THROWS_AS(t.validate(), Error);
    t.samples = {{0.0, 0, 0, 0, 0}, {0.0, 1, 0, 0, 0}};
    CHECK_THROWS_AS(t.validate(), Error);
    t.samples[1].t = 1.0;
    CHECK_NOTHROW(t.validate());
  }
}
