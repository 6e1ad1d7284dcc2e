#include <benchmark/benchmark.h>

#include "npl/modes.hpp"
#include "npl/oracle.hpp"

// One backward-Euler step on an n x n grid.
static void BM_ImplicitStep(benchmark::State& state) {
  using namespace npl;
  oracle::GridSpec grid;
  grid.nx = grid.ny = static_cast<int>(state.range(0));
  grid.nt = 8;
  grid.t_end = 1.0 / 32;
  modes::ProblemSpec spec;
  const modes::Problem2Mode md(1, 1, 0, spec);
  const auto u0 = oracle::GridFunction::sample(grid, [&](double x, double y) { return md.value(x, y, 0.0); });
  for (auto _ : state) benchmark::DoNotOptimize(oracle::solve_degenerate_parabolic(md.spec(), u0, grid));
  state.SetItemsProcessed(state.iterations() * grid.nt);
}
BENCHMARK(BM_ImplicitStep)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
