#include <benchmark/benchmark.h>

#include <cmath>

#include "npl/quadrature.hpp"

static void BM_GaussLegendreNodes(benchmark::State& state) {
  const int order = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(npl::quadrature::gauss_legendre(order));
}
BENCHMARK(BM_GaussLegendreNodes)->Arg(16)->Arg(32)->Arg(64);

static void BM_TensorQuad3(benchmark::State& state) {
  const int order = static_cast<int>(state.range(0));
  const auto box = npl::quadrature::Box::cuboid(0, 1, 0, 1, 0, 1);
  auto f = [](std::span<const double> p) { return std::sqrt(p[0]) * std::cos(p[1]) * std::exp(-p[2]); };
  for (auto _ : state) benchmark::DoNotOptimize(npl::quadrature::gauss_quad(f, box, order));
}
BENCHMARK(BM_TensorQuad3)->Arg(8)->Arg(16)->Arg(32);
