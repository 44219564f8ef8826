#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "salpan/config.hpp"
#include "salpan/density.hpp"
#include "salpan/fixation.hpp"
#include "salpan/pipeline.hpp"
#include "salpan/ranking.hpp"
#include "salpan/superpixel.hpp"

namespace {

using namespace salpan;

// Smooth colour gradient with a bright disk; enough structure for SLIC.
Raster scene(int w, int h) {
  Raster rgb(w, h, ColorSpace::RGB);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const double dx = x - w / 2.0;
      const double dy = y - h / 2.0;
      const bool in = dx * dx + dy * dy < (h / 4.0) * (h / 4.0);
      rgb.at(x, y, 0) = in ? 0.9 : 0.2 + 0.3 * x / w;
      rgb.at(x, y, 1) = in ? 0.3 : 0.4 + 0.1 * std::sin(0.3 * x);
      rgb.at(x, y, 2) = in ? 0.2 : 0.5 + 0.2 * y / h;
    }
  return rgb;
}

void BM_Slic(benchmark::State& state) {
  const int w = static_cast<int>(state.range(0));
  const Raster lab = rgb_to_lab(scene(w, w / 2));
  const SlicParams params;
  for (auto _ : state) benchmark::DoNotOptimize(slic(lab, params));
}
BENCHMARK(BM_Slic)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_DensityMap(benchmark::State& state) {
  const int w = static_cast<int>(state.range(0));
  const Raster gray = to_gray(scene(w, w / 2));
  const auto radii = default_density_radii();
  for (auto _ : state) benchmark::DoNotOptimize(density_map(gray, radii));
}
BENCHMARK(BM_DensityMap)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_Dct2(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(7);
  Plane p{n, n, std::vector<double>(static_cast<std::size_t>(n) * n)};
  for (auto& v : p.values) v = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  for (auto _ : state) benchmark::DoNotOptimize(idct2(dct2(p)));
}
BENCHMARK(BM_Dct2)->Arg(64)->Arg(128);

void BM_Rank(benchmark::State& state) {
  const Raster lab = rgb_to_lab(scene(1024, 512));
  SlicParams params;
  params.k = static_cast<int>(state.range(0));
  const Segmentation seg = slic(lab, params);
  const RegionGraph graph = build_graph(seg, PipelineConfig{}.ranking.sigma2);
  std::vector<double> y(graph.size(), 0.0);
  y[graph.size() / 2] = 1.0;
  for (auto _ : state) benchmark::DoNotOptimize(rank(graph, y, 0.99));
}
BENCHMARK(BM_Rank)->Arg(200)->Arg(600)->Unit(benchmark::kMillisecond);

void BM_Detect(benchmark::State& state) {
  const int w = static_cast<int>(state.range(0));
  const Raster rgb = scene(w, w / 2);
  const PipelineConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(detect(rgb, cfg));
}
BENCHMARK(BM_Detect)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
