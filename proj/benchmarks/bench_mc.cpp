#include <benchmark/benchmark.h>

#include "exitrate/mc.hpp"

using namespace exitrate;

// Items processed = Euler steps actually taken, so the rate reads as steps/s.
static void BM_KilledEuler(benchmark::State& state) {
  const ValidatedProblem p = validate_problem(bm_interval());
  const Grid grid = build_grid(p, 1.0 / 64);
  SimulationOptions o;
  o.x0 = {0.5, 0.0};
  o.dt = 1e-4;
  o.T = 1.0;
  o.n_paths = static_cast<std::size_t>(state.range(0));
  o.workers = 1;
  double steps = 0.0;
  for (auto _ : state) {
    const TrajectoryEnsemble ens = simulate_killed(p, FeedbackPolicy::constant(grid, 0), o);
    for (double t : ens.exit_times) steps += t / o.dt;
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(steps));
}
BENCHMARK(BM_KilledEuler)->Arg(2000)->Unit(benchmark::kMillisecond);

static void BM_Gillespie(benchmark::State& state) {
  const ValidatedProblem p = validate_problem(bm_interval());
  const Grid grid = build_grid(p, 1.0 / 64);
  const GeneratorMatrix g = assemble_generator(grid, p, 0);
  std::uint64_t stream = 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(simulate_ctmc(g, grid.size() / 2, 10.0, 1, stream++).end_time);
}
BENCHMARK(BM_Gillespie);
