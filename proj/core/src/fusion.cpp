#include "salpan/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>

namespace salpan {

std::vector<std::size_t> local_maxima(const SaliencyMap& s, double threshold,
                                      MaximaNeighborhood neighborhood) {
  static constexpr int kEight[8][2] = {{-1, -1}, {0, -1}, {1, -1}, {-1, 0},
                                       {1, 0},   {-1, 1}, {0, 1},  {1, 1}};
  static constexpr int kCorners[4][2] = {{-1, -1}, {1, -1}, {-1, 1}, {1, 1}};
  const int (*offsets)[2] = neighborhood == MaximaNeighborhood::Eight ? kEight : kCorners;
  const int count = neighborhood == MaximaNeighborhood::Eight ? 8 : 4;

  std::vector<std::size_t> out;
  for (int y = 0; y < s.height(); ++y) {
    for (int x = 0; x < s.width(); ++x) {
      const double v = s.at(x, y);
      if (!(v > threshold)) continue;
      bool peak = true;
      for (int k = 0; k < count && peak; ++k) {
        const int nx = x + offsets[k][0];
        const int ny = y + offsets[k][1];
        if (nx < 0 || ny < 0 || nx >= s.width() || ny >= s.height()) continue;
        if (!(v > s.at(nx, ny))) peak = false;
      }
      if (peak) out.push_back(static_cast<std::size_t>(y) * s.width() + x);
    }
  }
  return out;
}

MaximaStats maxima_statistics(const SaliencyMap& s, const MaximaParams& params) {
  MaximaStats st;
  st.global_max = s.max();
  for (std::size_t i : local_maxima(s, params.threshold, params.neighborhood)) {
    ++st.detected;
    if (params.exclude_global && s[i] == st.global_max) continue;
    st.maxima_sum += s[i];
    ++st.maxima_count;
  }
  if (st.detected == 0) return st;
  // With the global peak excluded and nothing else standing out, the mean of
  // the remaining maxima is taken as 0.
  const double mean = st.maxima_count > 0 ? st.maxima_sum / st.maxima_count : 0.0;
  const double gap = st.global_max - mean;
  st.scale = gap * gap / st.global_max;
  return st;
}

SaliencyMap maxima_normalize(const SaliencyMap& s, const MaximaParams& params, Diagnostics* diag) {
  if (!(params.threshold >= 0.0 && params.threshold < 1.0))
    throw InvalidArgument("maxima_normalize: threshold must lie in [0,1)");
  const MaximaStats st = maxima_statistics(s, params);
  if (st.detected == 0) {
    warn(diag, "maxima_normalize", "no local maxima above threshold; map unchanged");
    return s;
  }
  SaliencyMap out(s.width(), s.height());
  for (std::size_t i = 0; i < s.size(); ++i) out[i] = s[i] * st.scale;
  if (st.scale == 0.0) warn(diag, "maxima_normalize", "single dominant maximum; map zeroed");
  return out;
}

SaliencyMap combine_pathways(const SaliencyMap& p1, const SaliencyMap& p2,
                             const MaximaParams& params, Diagnostics* diag) {
  if (p1.width() != p2.width() || p1.height() != p2.height())
    throw InvalidArgument("combine_pathways: dimension mismatch");
  const SaliencyMap a = maxima_normalize(p1, params, diag);
  const SaliencyMap b = maxima_normalize(p2, params, diag);
  SaliencyMap sum(p1.width(), p1.height());
  for (std::size_t i = 0; i < sum.size(); ++i) sum[i] = a[i] + b[i];
  return normalize(sum, diag);
}

std::vector<GraphEdge> saliency_edges(const Segmentation& seg, const std::vector<double>& scores) {
  std::vector<GraphEdge> edges;
  for (int i = 0; i < seg.region_count; ++i)
    for (int j : seg.adjacency[i])
      if (i < j) edges.push_back({i, j, std::abs(scores[i] - scores[j])});
  return edges;
}

GeodesicField geodesic_distances(int node_count, const std::vector<GraphEdge>& edges) {
  const int n = node_count;
  std::vector<std::vector<std::pair<int, double>>> adj(n);
  for (const auto& e : edges) {
    if (e.a < 0 || e.b < 0 || e.a >= n || e.b >= n || e.a == e.b)
      throw InvalidArgument("geodesic_distances: invalid edge");
    if (e.cost < 0.0) throw InvalidArgument("geodesic_distances: negative edge cost");
    adj[e.a].emplace_back(e.b, e.cost);
    adj[e.b].emplace_back(e.a, e.cost);
  }

  GeodesicField field;
  field.size = n;
  field.distance.assign(static_cast<std::size_t>(n) * n, std::numeric_limits<double>::infinity());
  using Item = std::pair<double, int>;
  for (int src = 0; src < n; ++src) {
    double* dist = field.distance.data() + static_cast<std::size_t>(src) * n;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    dist[src] = 0.0;
    heap.emplace(0.0, src);
    while (!heap.empty()) {
      const auto [d, u] = heap.top();
      heap.pop();
      if (d > dist[u]) continue;
      for (const auto& [v, c] : adj[u]) {
        const double nd = d + c;
        if (nd < dist[v]) {
          dist[v] = nd;
          heap.emplace(nd, v);
        }
      }
    }
  }

  if (!edges.empty()) {
    double mean = 0.0;
    for (const auto& e : edges) mean += e.cost;
    mean /= static_cast<double>(edges.size());
    double var = 0.0;
    for (const auto& e : edges) var += (e.cost - mean) * (e.cost - mean);
    field.sigma = std::sqrt(var / static_cast<double>(edges.size()));
  }
  field.sigma = std::max(field.sigma, kGeodesicSigmaFloor);
  return field;
}

std::vector<double> geodesic_smooth(const GeodesicField& field, const std::vector<double>& scores) {
  const int n = field.size;
  const double denom = 2.0 * field.sigma * field.sigma;
  std::vector<double> out(n, 0.0);
  for (int q = 0; q < n; ++q) {
    double total = 0.0;
    double acc = 0.0;
    for (int j = 0; j < n; ++j) {
      const double d = field.at(q, j);
      const double w = std::isinf(d) ? 0.0 : std::exp(-d * d / denom);
      total += w;
      acc += w * scores[j];
    }
    out[q] = acc / total;  // total >= 1 from the self term
  }
  return out;
}

SaliencyMap geodesic_refine(const SaliencyMap& s, const Segmentation& seg, Diagnostics* diag) {
  if (s.width() != seg.width || s.height() != seg.height)
    throw InvalidArgument("geodesic_refine: segmentation size mismatch");
  if (seg.region_count < 2) {
    warn(diag, "geodesic_refine", "single region; map returned unchanged");
    return s;
  }
  const auto scores = region_means(s, seg.labels, seg.region_count);
  const auto field = geodesic_distances(seg.region_count, saliency_edges(seg, scores));
  if (field.sigma == kGeodesicSigmaFloor)
    warn(diag, "geodesic_refine", "edge costs have no spread; sigma floored");
  const auto refined = geodesic_smooth(field, scores);
  return normalize(paint_regions(seg.width, seg.height, seg.labels, refined), diag);
}

}  // namespace salpan
