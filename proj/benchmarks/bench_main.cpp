// Microbenchmarks for the hot paths: expression evaluation and derivation,
// family field evaluation, residual checks, RK4 and quadrature tables.

#include <benchmark/benchmark.h>

#include "lpsym/dynamics.hpp"
#include "lpsym/verify.hpp"
#include "support/random_family.hpp"

using namespace lpsym;

namespace {

const Expression& sample_expression() {
  static const Expression e = parse("sin(x*y) + exp(-0.5*(x^2 + y^2))*atan2(y, x) + log(1 + t^2)", {"x", "y", "t"});
  return e;
}

void BM_ExprEval(benchmark::State& state) {
  const Expression& e = sample_expression();
  double x = 0.3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(e({x, 0.7, 0.2}));
    x += 1e-9;
  }
}
BENCHMARK(BM_ExprEval);

void BM_ExprDerive3(benchmark::State& state) {
  const Expression& e = sample_expression();
  for (auto _ : state) benchmark::DoNotOptimize(derive(e, "x", 3));
}
BENCHMARK(BM_ExprDerive3);

void BM_Parse(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(parse("sin(x*y) + exp(-0.5*(x^2 + y^2))*atan2(y, x) + log(1 + t^2)", {"x", "y", "t"}));
}
BENCHMARK(BM_Parse);

void BM_FieldEvaluate(benchmark::State& state) {
  const auto fam = testing::random_family(static_cast<SymmetryCase>(state.range(0)), 2);
  double x = 0.6;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fam.family->evaluate(x, -0.4, 0.5));
    x += 1e-9;
  }
}
BENCHMARK(BM_FieldEvaluate)->DenseRange(0, 3);

void BM_DeterminingResidual(benchmark::State& state) {
  const auto fam = testing::random_family(static_cast<SymmetryCase>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(determining_residual(*fam.family, fam.params(), 0.6, -0.4, 0.5));
}
BENCHMARK(BM_DeterminingResidual)->DenseRange(0, 3);

void BM_Rk4UniformB(benchmark::State& state) {
  const ExpressionField f(parse_lab("0"), parse_lab("0"), parse_lab("1"));
  for (auto _ : state) benchmark::DoNotOptimize(integrate_lab(f, {0.0, 0.0, 0.0, 1.0, 0.0}, 1.0, {1e-3, false}));
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_Rk4UniformB);

void BM_CanonicalTableBuild(benchmark::State& state) {
  const auto params = SymmetryParams::case_a(0.4, TimeFunction::parse("1 + 0.2*sin(t)"),
                                             TimeFunction::parse("0.5 + 0.3*t"), TimeFunction::parse("0.2*cos(t)"),
                                             TimeFunction::parse("0.1*t^2"), {0.0, 1.0});
  QuadratureGrid grid;
  grid.nodes = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(CanonicalMap(params, grid));
}
BENCHMARK(BM_CanonicalTableBuild)->Arg(512)->Arg(2048);

}  // namespace

BENCHMARK_MAIN();
