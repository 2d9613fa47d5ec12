#include <benchmark/benchmark.h>

#include <reftaylor/expansion.hpp>
#include <reftaylor/fem.hpp>
#include <reftaylor/field_registry.hpp>
#include <reftaylor/mesh.hpp>
#include <reftaylor/simplex.hpp>

using namespace reftaylor;

static void BM_RefinedExpansion(benchmark::State& state) {
  const auto e = lookup_field("exp3d");
  const int m = static_cast<int>(state.range(0));
  Point a(3);
  a << 0.1, 0.2, 0.3;
  Point h(3);
  h << 0.5, -0.1, 0.4;
  const auto b = e.bounds_on(a, h);
  for (auto _ : state) benchmark::DoNotOptimize(refined_expansion(e.field, a, h, m, WeightKind::Closed, b));
}
BENCHMARK(BM_RefinedExpansion)->RangeMultiplier(4)->Range(1, 64);

static void BM_PiStar(benchmark::State& state) {
  const auto e = lookup_field("sin3d");
  const auto mesh = uniform_mesh(e.field.domain(), 1);
  const SimplexInterpolant interp(mesh.simplex(0), e.field);
  const Point P = mesh.simplex(0).from_barycentric(Vector::Constant(4, 0.25));
  for (auto _ : state) benchmark::DoNotOptimize(interp.pi_star(P));
}
BENCHMARK(BM_PiStar);

static void BM_FemSolve(benchmark::State& state) {
  const auto p = sine_problem(2);
  const auto mesh = uniform_mesh(Box::unit(2), static_cast<int>(state.range(0)));
  const auto space = state.range(1) == 1 ? FemSpace::P1 : FemSpace::P2;
  for (auto _ : state) benchmark::DoNotOptimize(assemble_and_solve(p, mesh, space));
}
BENCHMARK(BM_FemSolve)->Args({16, 1})->Args({64, 1})->Args({16, 2})->Args({32, 2})
    ->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
