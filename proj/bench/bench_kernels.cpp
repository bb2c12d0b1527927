// Serial reference vs OpenMP kernel for each parallel hot spot.

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "arcfit/compress.hpp"
#include "arcfit/moments.hpp"
#include "arcfit/scenario.hpp"

namespace {

std::vector<arcfit::Point2> noisy_arc(std::size_t n) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> jitter(-0.01, 0.01);
  std::vector<arcfit::Point2> pts(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double a = 2.0 * k / n;
    pts[k] = {1e3 + std::cos(a) + jitter(rng), -2e3 + std::sin(a) + jitter(rng)};
  }
  return pts;
}

void BM_AccumulateSerial(benchmark::State& st) {
  const auto pts = noisy_arc(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(arcfit::accumulate_points(pts));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

void BM_AccumulateParallel(benchmark::State& st) {
  const auto pts = noisy_arc(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(arcfit::accumulate_points_parallel(pts));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

void compress_run(benchmark::State& st, bool parallel, bool filtered) {
  const auto pts = noisy_arc(st.range(0));
  arcfit::CompressOptions o;
  o.tol = 0.02;
  o.parallel = parallel;
  o.filtered = filtered;
  for (auto _ : st) benchmark::DoNotOptimize(arcfit::compress(pts, o));
}

void BM_CompressSerial(benchmark::State& st) { compress_run(st, false, false); }
void BM_CompressParallel(benchmark::State& st) { compress_run(st, true, false); }
void BM_CompressFilteredSerial(benchmark::State& st) { compress_run(st, false, true); }
void BM_CompressFilteredParallel(benchmark::State& st) { compress_run(st, true, true); }

void BM_CompareSerial(benchmark::State& st) {
  arcfit::SimScenario s;
  s.trials = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(arcfit::run_compare_serial(s));
}

void BM_CompareParallel(benchmark::State& st) {
  arcfit::SimScenario s;
  s.trials = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(arcfit::run_compare(s));
}

}  // namespace

BENCHMARK(BM_AccumulateSerial)->Arg(1 << 16)->Arg(1 << 20)->UseRealTime();
BENCHMARK(BM_AccumulateParallel)->Arg(1 << 16)->Arg(1 << 20)->UseRealTime();
BENCHMARK(BM_CompressSerial)->Arg(500)->Arg(1500)->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CompressParallel)->Arg(500)->Arg(1500)->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CompressFilteredSerial)->Arg(1500)->Arg(10000)->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CompressFilteredParallel)->Arg(1500)->Arg(10000)->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CompareSerial)->Arg(200)->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CompareParallel)->Arg(200)->UseRealTime()->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
