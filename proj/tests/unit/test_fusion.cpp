#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <tuple>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "salpan/fusion.hpp"

namespace salpan {
namespace {

// 3x3 map filled with 0.1 except for the listed (index, value) pairs.
SaliencyMap grid3(std::initializer_list<std::pair<int, double>> peaks) {
  SaliencyMap m(3, 3, 0.1);
  for (auto [i, v] : peaks) m[i] = v;
  return m;
}

Segmentation blocks(int bw, int bh, int cell, const std::vector<int>& block_labels) {
  const int w = bw * cell;
  const int h = bh * cell;
  std::vector<int> labels(static_cast<std::size_t>(w) * h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) labels[y * w + x] = block_labels[(y / cell) * bw + x / cell];
  return make_segmentation(Raster(w, h, ColorSpace::LAB), labels);
}

TEST(MaximaNormalize, TwoCornerMaxima) {
  const SaliencyMap s = grid3({{0, 0.5}, {8, 0.9}});
  const MaximaStats st = maxima_statistics(s, {});
  EXPECT_EQ(st.detected, 2);
  EXPECT_DOUBLE_EQ(st.scale, 0.2 * 0.2 / 0.9);
  EXPECT_NEAR(st.scale, 0.0444444, 1e-6);
  const SaliencyMap out = maxima_normalize(s, {});
  EXPECT_NEAR(out[8], 0.04, 1e-12);
  EXPECT_NEAR(out[4], 0.1 * st.scale, 1e-15);
}

TEST(MaximaNormalize, SinglePeakLiteralModeZeroes) {
  const SaliencyMap s = grid3({{4, 0.9}});
  Diagnostics diag;
  const SaliencyMap out = maxima_normalize(s, {}, &diag);
  for (double v : out.values()) EXPECT_EQ(v, 0.0);
  EXPECT_TRUE(diag.has("maxima_normalize"));
}

TEST(MaximaNormalize, SinglePeakExcludeModeKeepsMap) {
  const SaliencyMap s = grid3({{4, 0.9}});
  MaximaParams p;
  p.exclude_global = true;
  const MaximaStats st = maxima_statistics(s, p);
  EXPECT_EQ(st.maxima_count, 0);
  EXPECT_DOUBLE_EQ(st.scale, 0.9);
  const SaliencyMap out = maxima_normalize(s, p);
  EXPECT_DOUBLE_EQ(out[4], 0.81);
}

TEST(MaximaNormalize, ExcludeModeAveragesTheOthers) {
  const SaliencyMap s = grid3({{0, 0.5}, {8, 0.9}});
  MaximaParams p;
  p.exclude_global = true;
  EXPECT_DOUBLE_EQ(maxima_statistics(s, p).scale, 0.4 * 0.4 / 0.9);
}

TEST(MaximaNormalize, NoMaximaLeavesMapUnchanged) {
  const SaliencyMap s(4, 3, {0.1, 0.05, 0.0, 0.1, 0.02, 0.1, 0.1, 0.0, 0.03, 0.1, 0.07, 0.1});
  Diagnostics diag;
  EXPECT_EQ(maxima_normalize(s, {}, &diag), s);
  EXPECT_TRUE(diag.has("maxima_normalize"));
  EXPECT_THROW(maxima_normalize(s, {1.0}), InvalidArgument);
}

TEST(MaximaNormalize, CornerNeighbourhoodAdmitsRidges) {
  // A two-pixel plateau: neither pixel beats its 8-neighbourhood, but each
  // beats its diagonal neighbours.
  const SaliencyMap s = grid3({{1, 0.6}, {4, 0.6}});
  EXPECT_TRUE(local_maxima(s, 0.1, MaximaNeighborhood::Eight).empty());
  EXPECT_EQ(local_maxima(s, 0.1, MaximaNeighborhood::Corners), (std::vector<std::size_t>{1, 4}));
}

TEST(MaximaNormalize, MaximaLocationsInvariantUnderScaling) {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 10; ++trial) {
    const SaliencyMap s(20, 15, testing::random_values(rng, 300));
    const auto base = local_maxima(s, 0.1, MaximaNeighborhood::Eight);
    EXPECT_FALSE(base.empty());
    for (double alpha : {1.0, 0.5, 0.3}) {
      SaliencyMap scaled(s);
      for (double& v : scaled.values()) v *= alpha;
      EXPECT_EQ(local_maxima(scaled, 0.1 * alpha, MaximaNeighborhood::Eight), base);
    }
  }
}

TEST(CombinePathways, ZeroSecondPathwayIsIdentity) {
  const SaliencyMap p1 = grid3({{0, 0.5}, {8, 0.9}});
  const SaliencyMap expected = normalize(maxima_normalize(p1, {}));
  EXPECT_EQ(combine_pathways(p1, SaliencyMap(3, 3, 0.0), {}), expected);
  EXPECT_EQ(combine_pathways(p1, p1, {}), expected);
}

TEST(CombinePathways, DistinctSinglePeaksCollapseInLiteralMode) {
  Diagnostics diag;
  const SaliencyMap out = combine_pathways(grid3({{0, 0.9}}), grid3({{8, 0.7}}), {}, &diag);
  EXPECT_TRUE(out.is_constant());
  EXPECT_TRUE(diag.has("normalize"));
  MaximaParams p;
  p.exclude_global = true;
  EXPECT_FALSE(combine_pathways(grid3({{0, 0.9}}), grid3({{8, 0.7}}), p).is_constant());
}

TEST(CombinePathways, RejectsMismatchedSizes) {
  EXPECT_THROW(combine_pathways(SaliencyMap(3, 3), SaliencyMap(3, 2), {}), InvalidArgument);
}

TEST(Geodesic, PathOfThreeRegions) {
  const Segmentation seg = blocks(3, 1, 1, {0, 1, 2});
  const auto edges = saliency_edges(seg, {1.0, 0.0, 1.0});
  ASSERT_EQ(edges.size(), 2u);
  EXPECT_EQ(edges[0].cost, 1.0);
  EXPECT_EQ(edges[1].cost, 1.0);
  const GeodesicField f = geodesic_distances(3, edges);
  EXPECT_EQ(f.at(0, 2), 2.0);
  EXPECT_EQ(f.at(2, 0), 2.0);
  EXPECT_EQ(f.at(1, 1), 0.0);
}

std::vector<GraphEdge> random_edges(std::mt19937_64& rng, int n, bool dyadic) {
  std::vector<GraphEdge> edges;
  auto cost = [&] {
    return dyadic ? static_cast<double>(rng() % 257) / 64.0
                  : static_cast<double>(rng() >> 11) * 0x1.0p-53;
  };
  for (int i = 1; i < n; ++i) edges.push_back({i, static_cast<int>(rng() % i), cost()});
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng() % 5 == 0) edges.push_back({i, j, cost()});
  return edges;
}

std::vector<std::tuple<int, int, double>> as_tuples(const std::vector<GraphEdge>& edges) {
  std::vector<std::tuple<int, int, double>> t;
  for (const auto& e : edges) t.emplace_back(e.a, e.b, e.cost);
  return t;
}

TEST(Geodesic, DijkstraMatchesFloydWarshall) {
  std::mt19937_64 rng(52);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 29);
    // Dyadic costs make every path sum exact, so the two agree bit for bit.
    const auto edges = random_edges(rng, n, true);
    EXPECT_EQ(geodesic_distances(n, edges).distance, testing::floyd_warshall(n, as_tuples(edges)));
    const auto real_edges = random_edges(rng, n, false);
    const auto got = geodesic_distances(n, real_edges).distance;
    const auto want = testing::floyd_warshall(n, as_tuples(real_edges));
    for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], want[i], 1e-12);
  }
}

TEST(Geodesic, MetricProperties) {
  std::mt19937_64 rng(53);
  const int n = 25;
  const GeodesicField f = geodesic_distances(n, random_edges(rng, n, false));
  for (int i = 0; i < n; ++i) {
    EXPECT_EQ(f.at(i, i), 0.0);
    for (int j = 0; j < n; ++j) {
      EXPECT_EQ(f.at(i, j), f.at(j, i));
      for (int k = 0; k < n; ++k) EXPECT_LE(f.at(i, k), f.at(i, j) + f.at(j, k) + 1e-12);
    }
  }
}

TEST(Geodesic, DisconnectedPairsAreInfiniteAndGetNoWeight) {
  const GeodesicField f = geodesic_distances(3, {{0, 1, 0.5}});
  EXPECT_TRUE(std::isinf(f.at(0, 2)));
  const auto smoothed = geodesic_smooth(f, {0.2, 0.4, 0.9});
  EXPECT_EQ(smoothed[2], 0.9);
  EXPECT_THROW(geodesic_distances(2, {{0, 0, 1.0}}), InvalidArgument);
  EXPECT_THROW(geodesic_distances(2, {{0, 1, -1.0}}), InvalidArgument);
}

TEST(Geodesic, SigmaIsPopulationDeviationWithFloor) {
  const GeodesicField f = geodesic_distances(3, {{0, 1, 1.0}, {1, 2, 3.0}});
  EXPECT_DOUBLE_EQ(f.sigma, 1.0);
  EXPECT_EQ(geodesic_distances(2, {{0, 1, 0.4}}).sigma, kGeodesicSigmaFloor);
}

TEST(Geodesic, SteepEdgeSeparatesClusters) {
  // Path 0-1-2-3 with scores {0, 0.02, 1, 1.03}: cheap, steep, cheap.
  const std::vector<double> scores = {0.0, 0.02, 1.0, 1.03};
  const Segmentation seg = blocks(4, 1, 1, {0, 1, 2, 3});
  const GeodesicField f = geodesic_distances(4, saliency_edges(seg, scores));
  const double s2 = 2.0 * f.sigma * f.sigma;
  ASSERT_GE(f.at(0, 2) - f.at(0, 1), std::sqrt(2.0) * f.sigma);
  const double within = std::exp(-f.at(0, 1) * f.at(0, 1) / s2);
  const double across = std::exp(-f.at(0, 2) * f.at(0, 2) / s2);
  EXPECT_GE(within / across, std::exp(1.0));
  const auto smoothed = geodesic_smooth(f, scores);
  EXPECT_LT(smoothed[0], 0.5);
  EXPECT_GT(smoothed[3], 0.5);
}

TEST(GeodesicRefine, FlatFieldGivesConstantMap) {
  const Segmentation seg = blocks(3, 2, 2, {0, 1, 2, 3, 4, 5});
  Diagnostics diag;
  const SaliencyMap out = geodesic_refine(SaliencyMap(6, 4, 0.6), seg, &diag);
  EXPECT_TRUE(out.is_constant());
  EXPECT_NEAR(out[0], 0.6, 1e-15);
  EXPECT_TRUE(diag.has("geodesic_refine"));
}

TEST(GeodesicRefine, SmoothedScoresStayInConvexHull) {
  std::mt19937_64 rng(54);
  const int n = 12;
  const auto scores = testing::random_values(rng, n);
  std::vector<int> ids(n);
  std::iota(ids.begin(), ids.end(), 0);
  const Segmentation seg = blocks(4, 3, 2, ids);
  const auto smoothed = geodesic_smooth(geodesic_distances(n, saliency_edges(seg, scores)), scores);
  const auto [lo, hi] = std::minmax_element(scores.begin(), scores.end());
  for (double v : smoothed) {
    EXPECT_GE(v, *lo - 1e-15);
    EXPECT_LE(v, *hi + 1e-15);
  }
}

TEST(GeodesicRefine, InvariantToRegionRelabelling) {
  std::mt19937_64 rng(55);
  const SaliencyMap s(12, 9, testing::random_values(rng, 108));
  std::vector<int> ids(12);
  std::iota(ids.begin(), ids.end(), 0);
  std::vector<int> perm(ids);
  std::shuffle(perm.begin(), perm.end(), rng);
  const SaliencyMap a = geodesic_refine(s, blocks(4, 3, 3, ids));
  const SaliencyMap b = geodesic_refine(s, blocks(4, 3, 3, perm));
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-12);
}

TEST(GeodesicRefine, SingleRegionReturnsInput) {
  std::mt19937_64 rng(56);
  const SaliencyMap s(4, 4, testing::random_values(rng, 16));
  Diagnostics diag;
  EXPECT_EQ(geodesic_refine(s, blocks(1, 1, 4, {0}), &diag), s);
  EXPECT_TRUE(diag.has("geodesic_refine"));
  EXPECT_THROW(geodesic_refine(SaliencyMap(3, 4), blocks(1, 1, 4, {0})), InvalidArgument);
}

}  // namespace
}  // namespace salpan
