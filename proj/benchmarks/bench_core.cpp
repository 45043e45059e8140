#include <benchmark/benchmark.h>

#include "rftrap/analysis.hpp"
#include "rftrap/extension.hpp"
#include "rftrap/generator.hpp"

using namespace rftrap;

namespace {

Poly2 dense(int degree) {
  Poly2 p;
  for (int d = 0; d <= degree; ++d)
    for (int i = 0; i <= d; ++i) p += Poly2::monomial(i, d - i, 1.0 / (1 + i + d));
  return p;
}

void BM_OddExtend(benchmark::State& state) {
  const Poly2 p = dense(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(odd_extend(p));
}
BENCHMARK(BM_OddExtend)->Arg(4)->Arg(8)->Arg(16);

void BM_SeriesHessian(benchmark::State& state) {
  const Field f{odd_extend(dense(10))};
  Vec3 r{0.3, -0.2, 0.1};
  for (auto _ : state) {
    benchmark::DoNotOptimize(pseudopotential_hessian(f, r));
    r[0] += 1e-9;
  }
}
BENCHMARK(BM_SeriesHessian);

void BM_FourierHessian(benchmark::State& state) {
  const Field f = extend(compile(catalog("round")));
  Vec3 r{0.3, -0.2, 0.1};
  for (auto _ : state) {
    benchmark::DoNotOptimize(pseudopotential_hessian(f, r));
    r[0] += 1e-9;
  }
}
BENCHMARK(BM_FourierHessian);

void BM_NullLines(benchmark::State& state) {
  const Generator g = compile(catalog("round", {{"c", 0.2}}));
  const int res = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(null_lines(g, {-2.0, 2.0, -2.0, 2.0}, res));
}
BENCHMARK(BM_NullLines)->Arg(100)->Arg(400);

void BM_CriticalPoints(benchmark::State& state) {
  const Generator g = compile(catalog("round", {{"c", 0.2}}));
  for (auto _ : state) benchmark::DoNotOptimize(critical_points(g, {-2.0, 2.0, -2.0, 2.0}, 40));
}
BENCHMARK(BM_CriticalPoints);

}  // namespace

BENCHMARK_MAIN();
