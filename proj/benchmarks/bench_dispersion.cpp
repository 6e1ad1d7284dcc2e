#include <benchmark/benchmark.h>

#include "npl/dispersion.hpp"

static void BM_Determinant(benchmark::State& state) {
  npl::dispersion::TransmissionProblem p;
  p.k = {1, -1, 1, 1, 1, -1};
  npl::cplx z(3.0, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(npl::dispersion::dispersion_determinant_entire(z, p));
    z += 1e-3;
  }
}
BENCHMARK(BM_Determinant);

static void BM_Scan(benchmark::State& state) {
  npl::dispersion::TransmissionProblem p;
  p.k = {1, 1, 1, 1, 1, 1};
  p.alpha = 0.5;
  npl::dispersion::ScanOptions opt;
  opt.threads = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(npl::dispersion::scan_roots({-60.0, 10.0, -20.0, 20.0}, {128, 64}, p, opt));
}
BENCHMARK(BM_Scan)->Arg(1)->Arg(4)->UseRealTime()->Unit(benchmark::kMillisecond);
