#pragma once

#include <span>
#include <vector>

#include "salpan/raster.hpp"
#include "salpan/superpixel.hpp"

namespace salpan {

/// Query seeds with strengths y_i in {0, 0.5, 1}.
struct SeedSet {
  std::vector<int> strong;  ///< sorted node ids, y = 1
  std::vector<int> weak;    ///< sorted node ids, y = 0.5
  std::vector<double> y;

  static SeedSet from_sets(int n, std::vector<int> strong, std::vector<int> weak);
  bool empty() const noexcept { return strong.empty() && weak.empty(); }
};

/// strong: s_i >= 2 mean(s); weak: mean(s) <= s_i < 2 mean(s).
/// Throws NoSeedsError when every score is zero.
SeedSet foreground_seeds(std::span<const double> scores);

/// Threshold border distances like foreground_seeds; non-border nodes get
/// y = 0. When the mean distance is at most kIndistinguishableBorder (LAB
/// units, far above averaging round-off) all border nodes become weak seeds.
inline constexpr double kIndistinguishableBorder = 1e-9;
SeedSet background_seeds_from_distances(int node_count, std::span<const int> border,
                                        std::span<const double> distances,
                                        Diagnostics* diag = nullptr);

/// Distances of border region colours from their average colour, then
/// background_seeds_from_distances.
SeedSet background_seeds(const Segmentation& seg, Diagnostics* diag = nullptr);

/// Solve (D - alpha W) g = y with a sparse LDL^T factorization.
/// Throws NumericalError when a node has zero degree.
std::vector<double> rank(const RegionGraph& graph, const SeedSet& seeds, double alpha);
std::vector<double> rank(const RegionGraph& graph, std::span<const double> y, double alpha);

/// Strict diagonal dominance of D - alpha W (row-wise).
bool diagonally_dominant(const RegionGraph& graph, double alpha);

/// Painted normalize(g*).
SaliencyMap grow_foreground(const RegionGraph& graph, const Segmentation& seg,
                            const SeedSet& seeds, double alpha, Diagnostics* diag = nullptr);

/// Painted 1 - normalize(g*).
SaliencyMap grow_background(const RegionGraph& graph, const Segmentation& seg,
                            const SeedSet& seeds, double alpha, Diagnostics* diag = nullptr);

/// normalize(fg * bg).
SaliencyMap combine_pathway1(const SaliencyMap& fg, const SaliencyMap& bg,
                             Diagnostics* diag = nullptr);

/// Per-region normalize(g*), or 1 - normalize(g*) when `complement`.
std::vector<double> normalized_ranks(const std::vector<double>& g, bool complement,
                                     Diagnostics* diag = nullptr);

}  // namespace salpan
