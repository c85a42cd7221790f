#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "lpsym_cli/commands.hpp"
#include "lpsym_cli/config.hpp"

using namespace lpsym;
using namespace lpsym::cli;
namespace fs = std::filesystem;

namespace {

const fs::path kConfigs = LPSYM_CONFIG_DIR;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("lpsym_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

const char* kMinimal = R"(
[case]
version = 1
case = A
t0 = 0
t1 = 1
[functions]
rho = "1"
)";

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("shipped configs parse, validate and serialize stably") {
    int seen = 0;
    for (const auto& entry : fs::directory_iterator(kConfigs)) {
      if (entry.path().extension() != ".cfg") continue;
      INFO(entry.path().string());
      const RunConfig c = load_config(entry.path().string());
      const std::string text = serialize_config(c);
      const RunConfig again = parse_config(text);
      CHECK(again == c);
      CHECK(serialize_config(again) == text);
      ++seen;
    }
    CHECK(seen >= 9);
  }

  TEST_CASE("minimal config takes defaults") {
    const RunConfig c = parse_config(kMinimal);
    CHECK(c.kind == SymmetryCase::A);
    CHECK(c.k == 0.0);
    CHECK(c.check.tol == 1e-6);
    CHECK(c.integrate.step == 1e-3);
    CHECK_FALSE(c.grid_x.has_value());
  }

  TEST_CASE("errors name the offending key") {
    auto message = [](const std::string& text) -> std::string {
      try {
        (void)parse_config(text);
      } catch (const ConfigError& e) {
        return e.what();
      }
      return "";
    };
    CHECK(message(std::string(kMinimal) + "bogus = \"1\"\n").find("bogus") != std::string::npos);
    CHECK(message("[case]\nversion = 1\ncase = A\n[functions]\nomega = \"1\"\n").find("rho") != std::string::npos);
    CHECK(message("[case]\nversion = 1\ncase = A\n[functions]\nrho = \"1 +* t\"\n").find("rho") != std::string::npos);
    CHECK(message("[case]\nversion = 2\ncase = A\n[functions]\nrho = \"1\"\n").find("version") != std::string::npos);
    CHECK(message("[case]\nversion = 1\ncase = E\n").find("case") != std::string::npos);
    CHECK(message("[case]\nversion = 1\ncase = D\nk = 0\n").find("k") != std::string::npos);
    CHECK(message("[nowhere]\n").find("nowhere") != std::string::npos);
    CHECK(message(std::string(kMinimal) + "[grid]\nx = 1, 0\n").find("x") != std::string::npos);
    CHECK(message("[case]\nversion = 1\ncase = B\n[functions]\nomega = \"t\"\n").find("omega") != std::string::npos);
    CHECK(message("[case]\nversion = 1\ncase = A\n[functions]\nrho = \"x\"\n").find("rho") != std::string::npos);
  }

  TEST_CASE("model reflects overrides") {
    const RunConfig c = parse_config(std::string(kMinimal) + "bbar = \"2\"\n[field]\ne2_add = \"x\"\n");
    const Model m = build_model(c);
    REQUIRE(m.family);
    const FieldValue v = m.field->evaluate(0.5, 0.0, 0.3);
    CHECK(v.b == doctest::Approx(2.0));
    CHECK(v.e2 == doctest::Approx(0.5));
    const RunConfig raw = parse_config(std::string(kMinimal) + "[field]\ne1 = \"0\"\ne2 = \"0\"\nb = \"x*t\"\n");
    const Model r = build_model(raw);
    CHECK(r.field->evaluate(2.0, 0.0, 3.0).b == doctest::Approx(6.0));
    CHECK_THROWS_AS(build_model(parse_config(std::string(kMinimal) + "[field]\nb = \"x\"\n")), ConfigError);
  }

  TEST_CASE("commands are deterministic") {
    const RunConfig c = load_config((kConfigs / "case_b_general.cfg").string());
    std::ostringstream log;
    CommandOptions a, b;
    a.out_dir = scratch("det_a").string();
    b.out_dir = scratch("det_b").string();
    a.workers = 1;
    b.workers = 3;
    CHECK(cmd_build_eval(c, a, log) == kExitOk);
    CHECK(cmd_build_eval(c, b, log) == kExitOk);
    CHECK(slurp(fs::path(a.out_dir) / "field.csv") == slurp(fs::path(b.out_dir) / "field.csv"));
    CHECK(cmd_integrate(c, a, log) == kExitOk);
    CHECK(cmd_integrate(c, b, log) == kExitOk);
    CHECK(slurp(fs::path(a.out_dir) / "lab.csv") == slurp(fs::path(b.out_dir) / "lab.csv"));
  }

  TEST_CASE("build-eval of the identity config") {
    const RunConfig c = load_config((kConfigs / "case_a_identity.cfg").string());
    CommandOptions o;
    o.out_dir = scratch("identity").string();
    std::ostringstream log;
    REQUIRE(cmd_build_eval(c, o, log) == kExitOk);
    std::istringstream in(slurp(fs::path(o.out_dir) / "field.csv"));
    std::string line;
    std::getline(in, line);
    CHECK(line == "x,y,t,E1,E2,B,status");
    int rows = 0;
    while (std::getline(in, line)) {
      double x, y, t, e1, e2, b;
      char sep;
      std::istringstream row(line);
      row >> x >> sep >> y >> sep >> t >> sep >> e1 >> sep >> e2 >> sep >> b;
      CHECK(e1 == doctest::Approx(x * y));
      CHECK(e2 == doctest::Approx(0.5 * x * x));
      CHECK(b == doctest::Approx(1 + 0.5 * x));
      ++rows;
    }
    CHECK(rows == 4);
  }

  TEST_CASE("integrate emits oracle-matching trajectories") {
    auto rows = [](const fs::path& p) {
      std::vector<std::vector<double>> out;
      std::istringstream in(slurp(p));
      std::string line;
      std::getline(in, line);
      while (std::getline(in, line)) {
        std::vector<double> row;
        std::istringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) row.push_back(std::stod(cell));
        out.push_back(row);
      }
      return out;
    };
    std::ostringstream log;
    CommandOptions o;

    o.out_dir = scratch("gyro").string();
    REQUIRE(cmd_integrate(load_config((kConfigs / "gyro.cfg").string()), o, log) == kExitOk);
    double gyro = 0.0;
    for (const auto& r : rows(fs::path(o.out_dir) / "lab.csv"))
      gyro = std::max(gyro, std::hypot(r[1] - std::sin(r[0]), r[2] - std::cos(r[0]) + 1.0));
    CHECK(gyro <= 1e-8);

    o.out_dir = scratch("zero").string();
    REQUIRE(cmd_integrate(load_config((kConfigs / "zero_field.cfg").string()), o, log) == kExitOk);
    for (const auto& r : rows(fs::path(o.out_dir) / "lab.csv")) {
      CHECK(r[1] == doctest::Approx(r[0]).epsilon(1e-12));
      CHECK(r[2] == doctest::Approx(r[0]).epsilon(1e-12));
    }

    o.out_dir = scratch("frames").string();
    o.plot = true;
    REQUIRE(cmd_integrate(load_config((kConfigs / "case_a_general.cfg").string()), o, log) == kExitOk);
    CHECK(fs::exists(fs::path(o.out_dir) / "canonical.csv"));
    double dev = 0.0;
    for (const auto& r : rows(fs::path(o.out_dir) / "comparison.csv")) dev = std::max(dev, r[3]);
    CHECK(dev <= 1e-6);
  }

  TEST_CASE("case D uniform field on a grid") {
    const RunConfig c = parse_config(
        "[case]\nversion = 1\ncase = D\nk = 1\n[functions]\nbbar = \"1\"\n[grid]\nx = 0.5, 1, 2\ny = -1, 1, 2\nt = 0, 1, 2\n");
    CommandOptions o;
    o.out_dir = scratch("case_d").string();
    std::ostringstream log;
    REQUIRE(cmd_build_eval(c, o, log) == kExitOk);
    std::istringstream in(slurp(fs::path(o.out_dir) / "field.csv"));
    std::string line;
    std::getline(in, line);
    int rows = 0;
    while (std::getline(in, line)) {
      const auto last = line.rfind(',');
      const auto prev = line.rfind(',', last - 1);
      CHECK(std::stod(line.substr(prev + 1, last - prev - 1)) == 1.0);
      ++rows;
    }
    CHECK(rows == 8);
  }
}
