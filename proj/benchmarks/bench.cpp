#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "motionscope/metrics.hpp"
#include "motionscope/wavelet.hpp"
#include "motionscope/window.hpp"

namespace {

using namespace motionscope;

std::vector<double> random_series(std::size_t n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(0.0, 100.0);
  std::vector<double> v(n);
  for (double& x : v) x = dist(rng);
  return v;
}

void BM_CwtEnergy(benchmark::State& state) {
  const auto v = random_series(static_cast<std::size_t>(state.range(0)), 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(energy_series(v));
  }
}
BENCHMARK(BM_CwtEnergy)->Arg(150)->Arg(300)->Arg(600);

void BM_FilterPeaks(benchmark::State& state) {
  EnergySeries e;
  e.raw = random_series(static_cast<std::size_t>(state.range(0)), 11);
  e.filtered = e.raw;
  for (auto _ : state) {
    benchmark::DoNotOptimize(filter_peaks(e, 3));
  }
}
BENCHMARK(BM_FilterPeaks)->Arg(1000)->Arg(10000);

void BM_SelectWindow(benchmark::State& state) {
  const int frames = static_cast<int>(state.range(0));
  EnergySeries e;
  e.raw = random_series(static_cast<std::size_t>(frames - 1), 13);
  e.filtered = e.raw;
  for (auto _ : state) {
    benchmark::DoNotOptimize(select_window(e, 30.0, frames, 6.0));
  }
}
BENCHMARK(BM_SelectWindow)->Arg(1000)->Arg(100000);

void BM_Ssim(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  FrameImage a, b;
  a.width = b.width = side;
  a.height = b.height = side;
  a.channels = b.channels = 3;
  a.values = random_series(static_cast<std::size_t>(side) * side * 3, 17);
  b.values = random_series(static_cast<std::size_t>(side) * side * 3, 19);
  for (double& v : a.values) v /= 100.0;
  for (double& v : b.values) v /= 100.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ssim(a, b));
  }
}
BENCHMARK(BM_Ssim)->Arg(64)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
