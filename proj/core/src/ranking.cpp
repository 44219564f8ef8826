#include "salpan/ranking.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

namespace salpan {

SeedSet SeedSet::from_sets(int n, std::vector<int> strong, std::vector<int> weak) {
  SeedSet s;
  std::sort(strong.begin(), strong.end());
  std::sort(weak.begin(), weak.end());
  s.y.assign(n, 0.0);
  for (int i : strong) s.y[i] = 1.0;
  for (int i : weak) {
    if (s.y[i] != 0.0) throw InvalidArgument("seed node is both strong and weak");
    s.y[i] = 0.5;
  }
  s.strong = std::move(strong);
  s.weak = std::move(weak);
  return s;
}

namespace {

// Foreground and background seeds share this two-threshold rule.
void split_by_mean(std::span<const int> ids, std::span<const double> values, double mean,
                   std::vector<int>& strong, std::vector<int>& weak) {
  for (std::size_t k = 0; k < ids.size(); ++k) {
    const double v = values[k];
    if (v >= 2.0 * mean) {
      strong.push_back(ids[k]);
    } else if (v >= mean) {
      weak.push_back(ids[k]);
    }
  }
}

}  // namespace

SeedSet foreground_seeds(std::span<const double> scores) {
  if (scores.empty()) throw NoSeedsError("foreground_seeds: no scores");
  for (double s : scores)
    if (!std::isfinite(s) || s < 0.0)
      throw InvalidArgument("foreground_seeds: scores must be finite and non-negative");
  const double mean =
      std::accumulate(scores.begin(), scores.end(), 0.0) / static_cast<double>(scores.size());
  if (mean == 0.0) throw NoSeedsError("foreground_seeds: all scores are zero");
  std::vector<int> ids(scores.size());
  std::iota(ids.begin(), ids.end(), 0);
  std::vector<int> strong, weak;
  split_by_mean(ids, scores, mean, strong, weak);
  return SeedSet::from_sets(static_cast<int>(scores.size()), std::move(strong), std::move(weak));
}

SeedSet background_seeds_from_distances(int node_count, std::span<const int> border,
                                        std::span<const double> distances, Diagnostics* diag) {
  if (border.empty()) throw InvalidArgument("background_seeds: no border regions");
  if (border.size() != distances.size())
    throw InvalidArgument("background_seeds: distance count mismatch");
  const double mean = std::accumulate(distances.begin(), distances.end(), 0.0) /
                      static_cast<double>(distances.size());
  std::vector<int> strong, weak;
  if (mean <= kIndistinguishableBorder) {
    warn(diag, "background_seeds", "border regions are indistinguishable; all become weak seeds");
    weak.assign(border.begin(), border.end());
  } else {
    split_by_mean(border, distances, mean, strong, weak);
  }
  return SeedSet::from_sets(node_count, std::move(strong), std::move(weak));
}

SeedSet background_seeds(const Segmentation& seg, Diagnostics* diag) {
  const auto& border = seg.border_regions;
  if (border.empty()) throw InvalidArgument("background_seeds: no border regions");
  std::array<double, 3> avg{0.0, 0.0, 0.0};
  for (int r : border)
    for (int c = 0; c < 3; ++c) avg[c] += seg.region_mean_lab[r][c];
  for (double& c : avg) c /= static_cast<double>(border.size());
  std::vector<double> dist(border.size());
  for (std::size_t k = 0; k < border.size(); ++k) {
    const auto& m = seg.region_mean_lab[border[k]];
    dist[k] = std::sqrt((m[0] - avg[0]) * (m[0] - avg[0]) + (m[1] - avg[1]) * (m[1] - avg[1]) +
                        (m[2] - avg[2]) * (m[2] - avg[2]));
  }
  return background_seeds_from_distances(seg.region_count, border, dist, diag);
}

bool diagonally_dominant(const RegionGraph& graph, double alpha) {
  for (int i = 0; i < graph.size(); ++i) {
    double off = 0.0;
    for (int j : graph.neighbors(i)) off += alpha * graph.weight(i, j);
    if (!(graph.degree(i) > off)) return false;
  }
  return true;
}

std::vector<double> rank(const RegionGraph& graph, std::span<const double> y, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("rank: alpha must lie in (0,1)");
  const int n = graph.size();
  if (static_cast<int>(y.size()) != n) throw InvalidArgument("rank: query vector size mismatch");
  for (int i = 0; i < n; ++i)
    if (!(graph.degree(i) > 0.0))
      throw NumericalError("rank: node " + std::to_string(i) + " has zero degree; system is singular");
  if (!diagonally_dominant(graph, alpha))
    throw NumericalError("rank: D - alpha W is not strictly diagonally dominant");

  std::vector<Eigen::Triplet<double>> triplets;
  for (int i = 0; i < n; ++i) {
    triplets.emplace_back(i, i, graph.degree(i));
    for (int j : graph.neighbors(i)) triplets.emplace_back(i, j, -alpha * graph.weight(i, j));
  }
  Eigen::SparseMatrix<double> a(n, n);
  a.setFromTriplets(triplets.begin(), triplets.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(a);
  if (solver.info() != Eigen::Success) throw NumericalError("rank: factorization failed");
  Eigen::VectorXd rhs(n);
  for (int i = 0; i < n; ++i) rhs[i] = y[i];
  const Eigen::VectorXd g = solver.solve(rhs);
  if (solver.info() != Eigen::Success) throw NumericalError("rank: solve failed");
  std::vector<double> out(g.data(), g.data() + n);
  for (double v : out)
    if (!std::isfinite(v)) throw NumericalError("rank: non-finite solution");
  return out;
}

std::vector<double> rank(const RegionGraph& graph, const SeedSet& seeds, double alpha) {
  return rank(graph, seeds.y, alpha);
}

std::vector<double> normalized_ranks(const std::vector<double>& g, bool complement,
                                     Diagnostics* diag) {
  const SaliencyMap m = normalize(SaliencyMap(static_cast<int>(g.size()), 1, g), diag);
  std::vector<double> out(m.values().begin(), m.values().end());
  if (complement)
    for (double& v : out) v = 1.0 - v;
  return out;
}

SaliencyMap grow_foreground(const RegionGraph& graph, const Segmentation& seg,
                            const SeedSet& seeds, double alpha, Diagnostics* diag) {
  const auto g = rank(graph, seeds, alpha);
  const auto values = normalized_ranks(g, false, diag);
  return paint_regions(seg.width, seg.height, seg.labels, values);
}

SaliencyMap grow_background(const RegionGraph& graph, const Segmentation& seg,
                            const SeedSet& seeds, double alpha, Diagnostics* diag) {
  const auto g = rank(graph, seeds, alpha);
  const auto values = normalized_ranks(g, true, diag);
  return paint_regions(seg.width, seg.height, seg.labels, values);
}

SaliencyMap combine_pathway1(const SaliencyMap& fg, const SaliencyMap& bg, Diagnostics* diag) {
  if (fg.width() != bg.width() || fg.height() != bg.height())
    throw InvalidArgument("combine_pathway1: dimension mismatch");
  SaliencyMap prod(fg.width(), fg.height());
  for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = fg[i] * bg[i];
  return normalize(prod, diag);
}

}  // namespace salpan
