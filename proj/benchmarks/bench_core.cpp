#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "debris/clusterer.hpp"
#include "debris/feature_select.hpp"
#include "debris/indices.hpp"
#include "debris/raster.hpp"

namespace {

using namespace debris;

std::vector<double> gaussian(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 g(seed);
  std::normal_distribution<double> d(0.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = d(g);
  return v;
}

void BM_ComputeIndices(benchmark::State& state) {
  std::mt19937_64 g(1);
  std::uniform_real_distribution<double> u(0.01, 0.6);
  std::vector<BandVector> rows(4096);
  for (auto& r : rows) {
    for (auto& b : r) b = u(g);
  }
  for (auto _ : state) {
    for (const auto& r : rows) benchmark::DoNotOptimize(compute_indices(r));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(rows.size()));
}
BENCHMARK(BM_ComputeIndices);

void BM_Upsample(benchmark::State& state) {
  const auto method = static_cast<Resampler>(state.range(0));
  auto r = make_raster(MsiBand::SWIR1, 60, 60, 20);
  const auto noise = gaussian(r.values.size(), 2);
  for (std::size_t i = 0; i < r.values.size(); ++i) r.values[i] = static_cast<float>(0.2 + 0.01 * noise[i]);
  for (auto _ : state) benchmark::DoNotOptimize(upsample_2x(r, method));
  state.SetLabel(std::string(to_string(method)));
}
BENCHMARK(BM_Upsample)->Arg(0)->Arg(1)->Arg(2);

void BM_KMeans(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0)), d = 10;
  const auto x = gaussian(n * d, 3);
  KMeansConfig cfg;
  cfg.k = 4;
  for (auto _ : state) benchmark::DoNotOptimize(kmeans_fit(MatrixView{x, d}, cfg));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_KMeans)->Arg(14400)->Arg(144000)->Unit(benchmark::kMillisecond);

void BM_FitTree(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0)), d = 19;
  const auto x = gaussian(n * d, 4);
  std::vector<std::uint32_t> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = (x[i * d] + 0.5 * x[i * d + 3] > 0.0) + (x[i * d + 7] > 1.0);
  const TrainingData data{x, y, d, 3};
  for (auto _ : state) benchmark::DoNotOptimize(fit_tree(data, 3));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_FitTree)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
