#include <benchmark/benchmark.h>

#include "npl/specfun.hpp"

static void BM_BesselJSeries(benchmark::State& state) {
  const double x = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(npl::specfun::bessel_j(1.0 / 3.0, x));
}
BENCHMARK(BM_BesselJSeries)->Arg(1)->Arg(8)->Arg(17);

static void BM_BesselJAsymptotic(benchmark::State& state) {
  const double x = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(npl::specfun::bessel_j(1.0 / 3.0, x));
}
BENCHMARK(BM_BesselJAsymptotic)->Arg(20)->Arg(50)->Arg(400);

static void BM_BesselI(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(npl::specfun::bessel_i(0.5, 10.0));
}
BENCHMARK(BM_BesselI);

static void BM_LnGamma(benchmark::State& state) {
  double x = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(npl::specfun::ln_gamma(x));
    x = x < 50 ? x + 0.37 : 0.1;
  }
}
BENCHMARK(BM_LnGamma);
