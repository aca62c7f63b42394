// Micro-benchmarks for the hot operations: structure table construction,
// BCH products across steps, certified norm bounds, vertical realization,
// and the full certified shortcut construction.
#include <benchmark/benchmark.h>

#include "carnot/algebra.hpp"
#include "carnot/group.hpp"
#include "carnot/norm.hpp"
#include "carnot/path.hpp"
#include "carnot/shortcut.hpp"

using namespace carnot;

namespace {

LieVector dense_vector(const AlgebraHandle& algebra, int seed) {
  LieVector v(algebra);
  for (int i = 0; i < algebra->dim(); ++i) {
    v.set_coord(i, Rational(seed + i, 7 + (i % 5)));
  }
  return v;
}

void bench_build_algebra(benchmark::State& state) {
  const int step = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_free_nilpotent(2, step));
  }
}
BENCHMARK(bench_build_algebra)->Arg(3)->Arg(4)->Arg(5)->Arg(6);

void bench_bch_product(benchmark::State& state) {
  const int step = static_cast<int>(state.range(0));
  auto algebra = build_free_nilpotent(2, step);
  auto a = exp_point(dense_vector(algebra, 3));
  auto b = exp_point(dense_vector(algebra, 5));
  for (auto _ : state) {
    benchmark::DoNotOptimize(bch_product(a, b));
  }
}
BENCHMARK(bench_bch_product)->Arg(2)->Arg(3)->Arg(4)->Arg(5);

void bench_certified_norm(benchmark::State& state) {
  auto algebra = build_free_nilpotent(2, 2);
  auto norm = make_norm(NormFamily::Lp, Rational(5, 2));
  auto v = basis_vector(algebra, 0) + Rational(3, 7) * basis_vector(algebra, 1);
  const Rational tolerance(1, 1000000000);
  for (auto _ : state) {
    benchmark::DoNotOptimize(certified_norm_upper(norm, v, tolerance));
  }
}
BENCHMARK(bench_certified_norm);

void bench_heisenberg_shortcut(benchmark::State& state) {
  auto algebra = build_free_nilpotent(2, 2);
  auto x1 = basis_vector(algebra, 0);
  auto x2 = basis_vector(algebra, 1);
  const Rational epsilon(1, 10);
  for (auto _ : state) {
    benchmark::DoNotOptimize(heisenberg_shortcut(x1, x2, epsilon));
  }
}
BENCHMARK(bench_heisenberg_shortcut);

void bench_realize_vertical(benchmark::State& state) {
  const int step = static_cast<int>(state.range(0));
  auto algebra = build_free_nilpotent(2, step);
  auto y = basis_vector(algebra, algebra->layer_start(step));
  for (auto _ : state) {
    benchmark::DoNotOptimize(realize_vertical(y));
  }
}
BENCHMARK(bench_realize_vertical)->Arg(2)->Arg(3)->Arg(4);

void bench_recursive_shortcut(benchmark::State& state) {
  const int step = static_cast<int>(state.range(0));
  auto algebra = build_free_nilpotent(2, step);
  auto x1 = basis_vector(algebra, 0);
  auto x2 = basis_vector(algebra, 1);
  ShortcutConfig config;
  config.margin_threshold = Rational(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(recursive_shortcut(x1, x2, config));
  }
}
BENCHMARK(bench_recursive_shortcut)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
