// Timing for the hot paths: Christoffels, shooting, condition sweeps and a
// short observer run on the oscillator.

#include <benchmark/benchmark.h>

#include <riemobs/riemobs.hpp>

using namespace riemobs;

namespace {

const BenchmarkSpec& oscillator() {
  static const BenchmarkSpec osc = harmonic_oscillator(0.5);
  return osc;
}

void BM_Christoffel(benchmark::State& state, const char* metric) {
  const MetricField& p = oscillator().metric(metric).p;
  const Vec x = oscillator().sim.x0;
  for (auto _ : state) benchmark::DoNotOptimize(christoffel(p, x));
}
BENCHMARK_CAPTURE(BM_Christoffel, ex8_closed, "ex8-closed");
BENCHMARK_CAPTURE(BM_Christoffel, ex8_recipe, "ex8");
BENCHMARK_CAPTURE(BM_Christoffel, sandwich, "sandwich");

void BM_GeodesicBvp(benchmark::State& state) {
  const BenchmarkSpec& osc = oscillator();
  const MetricField& p = osc.metric("ex8-closed").p;
  for (auto _ : state) benchmark::DoNotOptimize(geodesic_bvp_distance(p, osc.sim.xhat0, osc.sim.x0));
}
BENCHMARK(BM_GeodesicBvp)->Unit(benchmark::kMillisecond);

void BM_CheckA2(benchmark::State& state) {
  const BenchmarkSpec& osc = oscillator();
  for (auto _ : state) benchmark::DoNotOptimize(check_a2(osc.model, osc.metric("ex8").p));
}
BENCHMARK(BM_CheckA2)->Unit(benchmark::kMillisecond);

void BM_CheckNullity(benchmark::State& state) {
  const BenchmarkSpec& osc = oscillator();
  for (auto _ : state) benchmark::DoNotOptimize(check_a3_nullity(osc.model, osc.metric("ex8").p, osc.q));
}
BENCHMARK(BM_CheckNullity)->Unit(benchmark::kMillisecond);

void BM_SimulateEuclidean(benchmark::State& state) {
  const BenchmarkSpec& osc = oscillator();
  const MetricField& p = osc.metric("ex8-closed").p;
  ObserverConfig cfg = ObserverConfig::with_constant_gain(16.0);
  cfg.dt = osc.sim.dt;
  cfg.horizon = 1.0;
  cfg.sample_every = osc.sim.sample_every;
  cfg.method = DistanceMethod::EuclideanBound;
  const auto [lo, hi] = metric_eigen_bounds(p, osc.model.region, 128);
  cfg.lambda_min = lo;
  cfg.lambda_max = hi;
  for (auto _ : state) benchmark::DoNotOptimize(simulate(osc.model, p, osc.gap, cfg, osc.sim.x0, osc.sim.xhat0));
}
BENCHMARK(BM_SimulateEuclidean)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
