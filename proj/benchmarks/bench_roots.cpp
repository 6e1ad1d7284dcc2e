#include <benchmark/benchmark.h>

#include "npl/roots.hpp"

static void BM_BesselZeros(benchmark::State& state) {
  const int count = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(npl::roots::bessel_j_zeros(1.0 / 3.0, count));
  state.SetItemsProcessed(state.iterations() * count);
}
BENCHMARK(BM_BesselZeros)->Arg(5)->Arg(50)->Arg(200);
