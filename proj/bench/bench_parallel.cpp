// Serial reference kernels against their OpenMP counterparts. Thread count
// follows OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include "mediaflu/fit.hpp"
#include "mediaflu/rng.hpp"
#include "mediaflu/select.hpp"

using namespace mediaflu;

namespace {

std::vector<double> window() {
  const std::vector<double> theta{1.9, 1.5, 2.0, 30.0};
  auto w = synthetic_window(theta, MediaKind::Exponential, Variant::Seeiir, 0.3, 16);
  Rng rng(7);
  for (std::size_t i = 1; i < w.size(); ++i) w[i] *= 1.0 + 0.01 * rng.normal();
  return w;
}

MultiStartOptions starts(int n) {
  MultiStartOptions o;
  o.n_starts = n;
  return o;
}

void BM_MultiStartSerial(benchmark::State& state) {
  const auto w = window();
  const auto o = starts(static_cast<int>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(
        multi_start_fit_serial(w, Variant::Seeiir, MediaKind::Exponential, o).rss);
}

void BM_MultiStartParallel(benchmark::State& state) {
  const auto w = window();
  const auto o = starts(static_cast<int>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(
        multi_start_fit(w, Variant::Seeiir, MediaKind::Exponential, o).rss);
}

std::vector<std::vector<double>> weight_rows() {
  Rng rng(3);
  std::vector<std::vector<double>> rows(16, std::vector<double>(5));
  for (auto& r : rows) {
    double s = 0.0;
    for (double& v : r) s += (v = rng.uniform());
    for (double& v : r) v /= s;
  }
  return rows;
}

void BM_BootstrapSerial(benchmark::State& state) {
  const auto rows = weight_rows();
  AverageOptions o;
  o.resamples = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(bootstrap_mean_ci_serial(rows, o));
}

void BM_BootstrapParallel(benchmark::State& state) {
  const auto rows = weight_rows();
  AverageOptions o;
  o.resamples = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(bootstrap_mean_ci(rows, o));
}

}  // namespace

BENCHMARK(BM_MultiStartSerial)->Arg(8)->Arg(20)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_MultiStartParallel)->Arg(8)->Arg(20)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_BootstrapSerial)->Arg(10000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_BootstrapParallel)->Arg(10000)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
