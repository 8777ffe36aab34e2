#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "rayphase/bargmann.hpp"
#include "rayphase/chart.hpp"
#include "rayphase/geodesic.hpp"
#include "rayphase/nullphase.hpp"
#include "rayphase/sampling.hpp"

using namespace rayphase;

namespace {

RVector xi2(double a, double b) {
  RVector v(2);
  v << a, b;
  return v;
}

void BM_BargmannInvariant(benchmark::State& state) {
  Rng rng(1);
  const auto v = random_vertices(static_cast<int>(state.range(0)), 8, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(bargmann_invariant(v));
  }
}
BENCHMARK(BM_BargmannInvariant)->Arg(3)->Arg(8)->Arg(32);

void BM_GeometricPhase(benchmark::State& state) {
  Rng rng(2);
  const auto c =
      random_smooth_curve(8, static_cast<int>(state.range(0)), rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(geometric_phase(c));
  }
}
BENCHMARK(BM_GeometricPhase)->Arg(256)->Arg(1024)->Arg(4096);

void BM_FreeGeodesicPolygon(benchmark::State& state) {
  Rng rng(3);
  const auto v = random_vertices(4, 4, rng, 0.2);
  const int nodes = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        polygon_phase_check(v, free_geodesic_connector(), nodes));
  }
}
BENCHMARK(BM_FreeGeodesicPolygon)->Arg(256)->Arg(1024);

void BM_CoherentState(benchmark::State& state) {
  const CoherentChart chart(static_cast<int>(state.range(0)));
  const RVector xi = xi2(0.7, -1.1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(chart.state_at(xi));
  }
}
BENCHMARK(BM_CoherentState)->Arg(32)->Arg(64)->Arg(128);

void BM_GaussianMetric(benchmark::State& state) {
  const GaussianChart chart;
  const RVector xi = xi2(0.4, 1.3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(induced_metric(chart, xi));
  }
}
BENCHMARK(BM_GaussianMetric);

void BM_GeodesicShoot(benchmark::State& state) {
  const GaussianChart chart;
  const int steps = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        geodesic_shoot(chart, xi2(0.0, 1.0), xi2(1.0, 0.3), 1.0, steps));
  }
}
BENCHMARK(BM_GeodesicShoot)->Arg(128)->Arg(512);

void BM_SeparabilityTest(benchmark::State& state) {
  const CoherentChart chart(64);
  PathSpec circle;
  circle.s1 = 2.0;
  circle.xi = [](double s) {
    return CoherentChart::xi_of(std::polar(1.0, s));
  };
  const auto curve =
      chart_curve(chart, circle, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(separability_test(curve));
  }
}
BENCHMARK(BM_SeparabilityTest)->Arg(16)->Arg(32);

}  // namespace

BENCHMARK_MAIN();
