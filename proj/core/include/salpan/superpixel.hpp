#pragma once

#include <array>
#include <filesystem>
#include <vector>

#include "salpan/raster.hpp"

namespace salpan {

/// Superpixel partition and its region statistics.
struct Segmentation {
  int width = 0;
  int height = 0;
  std::vector<int> labels;  ///< per pixel, in [0, region_count)
  int region_count = 0;
  std::vector<std::array<double, 3>> region_mean_lab;
  std::vector<std::array<double, 2>> region_centroid;  ///< (x, y) in pixels
  std::vector<int> region_size;
  std::vector<std::vector<int>> adjacency;  ///< sorted, symmetric, irreflexive
  std::vector<int> border_regions;          ///< sorted ids touching an image edge

  bool is_border(int region) const;
};

/// Build a Segmentation from an arbitrary label image over a LAB raster.
/// Labels must cover [0, J) with every id present; 4-connectivity defines
/// adjacency.
Segmentation make_segmentation(const Raster& lab, std::vector<int> labels);

struct SlicParams {
  int k = 300;
  double compactness = 10.0;
  int iterations = 10;
};

/// SLIC over (L, a, b, x, y). Deterministic: seeds sit on a regular grid and
/// are nudged to the lowest-gradient pixel of their 3x3 neighbourhood.
/// Disconnected fragments are relabelled and fragments smaller than a
/// quarter of the nominal region area are merged into their largest
/// neighbouring fragment.
Segmentation slic(const Raster& lab, const SlicParams& params);

/// Affinity graph over superpixels with a dense weight matrix.
class RegionGraph {
public:
  RegionGraph() = default;
  explicit RegionGraph(int n);

  int size() const noexcept { return n_; }
  double weight(int i, int j) const noexcept {
    return w_[static_cast<std::size_t>(i) * n_ + j];
  }
  double degree(int i) const noexcept { return degree_[i]; }
  /// Neighbours with a structural edge (sorted).
  const std::vector<int>& neighbors(int i) const noexcept { return neighbors_[i]; }

  /// Set the weight of edge {i,j} (i != j) symmetrically.
  void set_edge(int i, int j, double w);

private:
  int n_ = 0;
  std::vector<double> w_;
  std::vector<double> degree_;
  std::vector<std::vector<int>> neighbors_;
};

/// w = exp(-distance / sigma2).
double affinity(double distance, double sigma2);

/// Region mean colours scaled to [0,1] per channel with the fixed CIELAB
/// ranges L/100, (a+128)/255, (b+128)/255.
std::array<double, 3> scaled_lab(const std::array<double, 3>& lab);

/// Edges join adjacent regions, regions sharing a neighbour, and every pair
/// of border regions. Weights use the Euclidean distance of scaled_lab means.
RegionGraph build_graph(const Segmentation& seg, double sigma2);

/// Debug dumps: 16-bit label PGM and an "i j w" edge list (i < j).
void dump_segmentation(const std::filesystem::path& label_pgm,
                       const std::filesystem::path& edge_list, const Segmentation& seg,
                       const RegionGraph& graph);

}  // namespace salpan
