#include <benchmark/benchmark.h>

#include "exitrate/control.hpp"
#include "exitrate/eigenpair.hpp"
#include "exitrate/generator.hpp"

using namespace exitrate;

static void BM_IntervalEigenpair(benchmark::State& state) {
  const ValidatedProblem p = validate_problem(bm_interval());
  const Grid grid = build_grid(p, 1.0 / static_cast<double>(state.range(0)));
  const GeneratorMatrix g = assemble_generator(grid, p, 0);
  for (auto _ : state) benchmark::DoNotOptimize(principal_eigenpair(g).lambda);
}
BENCHMARK(BM_IntervalEigenpair)->Arg(64)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

static void BM_SquareEigenpair(benchmark::State& state) {
  const ValidatedProblem p = validate_problem(rect_2d(1.0, true));
  const Grid grid = build_grid(p, 1.0 / static_cast<double>(state.range(0)));
  const GeneratorMatrix g = assemble_generator(grid, p, 0);
  for (auto _ : state) benchmark::DoNotOptimize(principal_eigenpair(g).lambda);
}
BENCHMARK(BM_SquareEigenpair)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

static void BM_PolicyIteration(benchmark::State& state) {
  const ValidatedProblem p = validate_problem(rect_2d(1.0));
  for (auto _ : state)
    benchmark::DoNotOptimize(
        policy_iteration(p, 1.0 / static_cast<double>(state.range(0)), Mode::kMax).lambda());
}
BENCHMARK(BM_PolicyIteration)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);
