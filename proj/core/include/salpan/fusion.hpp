#pragma once

#include <vector>

#include "salpan/raster.hpp"
#include "salpan/superpixel.hpp"

namespace salpan {

enum class MaximaNeighborhood {
  Eight,   ///< all 8 neighbours
  Corners  ///< only the four diagonal offsets (x±1, y±1)
};

struct MaximaParams {
  double threshold = 0.1;
  MaximaNeighborhood neighborhood = MaximaNeighborhood::Eight;
  /// Leave the global maximum out of the mean of local maxima.
  bool exclude_global = false;
};

struct MaximaStats {
  double global_max = 0.0;
  double maxima_sum = 0.0;
  int maxima_count = 0;  ///< maxima entering the mean
  int detected = 0;      ///< all maxima found, before any exclusion
  double scale = 1.0;
};

/// Local maxima above the threshold (strictly greater than every in-bounds
/// neighbour), and the resulting scale (G - mean of maxima)^2 / G.
MaximaStats maxima_statistics(const SaliencyMap& s, const MaximaParams& params);

/// Row-major indices of the detected local maxima.
std::vector<std::size_t> local_maxima(const SaliencyMap& s, double threshold,
                                      MaximaNeighborhood neighborhood);

/// S * (G - V/N)^2 / G. With no maxima the map is returned unchanged.
SaliencyMap maxima_normalize(const SaliencyMap& s, const MaximaParams& params,
                             Diagnostics* diag = nullptr);

/// normalize(MN(p1) + MN(p2)).
SaliencyMap combine_pathways(const SaliencyMap& p1, const SaliencyMap& p2,
                             const MaximaParams& params, Diagnostics* diag = nullptr);

struct GraphEdge {
  int a;
  int b;
  double cost;
};

/// All-pairs accumulated path costs over an undirected graph.
struct GeodesicField {
  int size = 0;
  std::vector<double> distance;  ///< size x size, row-major
  double sigma = 0.0;            ///< population std of edge costs, floored

  double at(int i, int j) const noexcept {
    return distance[static_cast<std::size_t>(i) * size + j];
  }
};

/// Dijkstra from every node. Unreachable pairs hold +infinity.
GeodesicField geodesic_distances(int node_count, const std::vector<GraphEdge>& edges);

/// Edges between adjacent regions weighted by |score_a - score_b|.
std::vector<GraphEdge> saliency_edges(const Segmentation& seg, const std::vector<double>& scores);

inline constexpr double kGeodesicSigmaFloor = 1e-6;

/// Region scores smoothed by row-normalized exp(-d_g^2 / (2 sigma^2)) weights.
std::vector<double> geodesic_smooth(const GeodesicField& field, const std::vector<double>& scores);

/// Region-mean scores, geodesic smoothing, paint, normalize. A single-region
/// segmentation returns the input unchanged.
SaliencyMap geodesic_refine(const SaliencyMap& s, const Segmentation& seg,
                            Diagnostics* diag = nullptr);

}  // namespace salpan
