#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "salpan/raster.hpp"
#include "salpan/superpixel.hpp"

namespace salpan {

/// Per-pixel Hoelder exponent d(x): slope of log mu(x, r) against log r.
struct DensityMap {
  int width = 0;
  int height = 0;
  std::vector<double> d;
  std::vector<int> radii;

  double at(int x, int y) const noexcept {
    return d[static_cast<std::size_t>(y) * width + x];
  }
  /// d rescaled to [0,1] for display.
  SaliencyMap to_map() const;
};

/// Intensities below this floor are raised to it before measuring disks.
inline constexpr double kDensityFloor = 1e-4;

std::vector<int> default_density_radii();

/// mu(x, r) sums the (floored) intensities inside the image-clipped disk
/// ||y - x|| <= r. The exponent is the least-squares slope across all radii.
/// Each pixel's sums are accumulated in a position-independent order, so the
/// interior of a shifted image yields bit-identical exponents.
DensityMap density_map(const Raster& gray, std::span<const int> radii, std::size_t threads = 1);

/// Region partition produced by segment_regions.
struct RegionPartition {
  int width = 0;
  int height = 0;
  std::vector<int> labels;  ///< per pixel, in [0, region_count)
  int region_count = 0;
  std::vector<int> region_size;
};

struct MergeParams {
  int regions = 8;
  /// Scale applied to d next to the [0,1]-scaled CIELAB channels.
  double density_weight = 0.25;
};

/// Deterministic greedy agglomeration on the feature (L, a, b, d).
///
/// Starts from `atoms` (one region per atom label) and repeatedly merges the
/// adjacent pair with the lowest Ward cost n_a n_b / (n_a + n_b) ||m_a - m_b||^2
/// until `params.regions` remain. Ties go to the pair whose smaller
/// representative (lowest row-major pixel index) is smallest, then to the
/// smaller second representative. Labels come back renumbered in row-major
/// order of first appearance.
RegionPartition segment_regions(const Raster& lab, const DensityMap& dmap,
                                const MergeParams& params, std::span<const int> atoms);

/// Pixel-atom variant; only practical for small images.
RegionPartition segment_regions(const Raster& lab, const DensityMap& dmap,
                                const MergeParams& params);

struct RegionContrast {
  std::vector<std::vector<double>> histograms;  ///< f(d, .) per region, sums to 1
  std::vector<double> bin_centers;
  std::vector<double> weights;  ///< |r_i| / N
  std::vector<double> saliency;  ///< S_b(r_k) before normalization
  SaliencyMap map;               ///< painted and normalized
};

/// Density distance between two regions: the double sum over bin pairs of
/// f1(i) f2(j) |center_i - center_j|.
double density_distance(std::span<const double> f1, std::span<const double> f2,
                        std::span<const double> centers);

/// Histogram-contrast saliency per region over `bins` density bins spanning
/// [min d, max d] of the whole image. A single region yields an all-zero map.
RegionContrast region_contrast(const RegionPartition& partition, const DensityMap& dmap,
                               int bins = 16, Diagnostics* diag = nullptr);

/// Otsu threshold (index t in [0,254]) over the 256-bin quantized histogram;
/// pixels with bin > t are foreground. Returns -1 when fewer than two bins
/// are populated.
int otsu_threshold(const SaliencyMap& s);

/// Binarize with Otsu. A constant map proposes the whole image.
GroundTruthMask binarize_proposals(const SaliencyMap& s, Diagnostics* diag = nullptr);

}  // namespace salpan
