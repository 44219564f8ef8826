#pragma once

// Independent reference computations. None of these call into the library's
// numerical code; they exist to check it.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <tuple>
#include <vector>

#include "salpan/raster.hpp"
#include "salpan/superpixel.hpp"

namespace salpan::testing {

/// Solve A x = b by Gaussian elimination with partial pivoting (A row-major).
inline std::vector<double> dense_solve(std::vector<double> a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a[r * n + col]) > std::abs(a[pivot * n + col])) pivot = r;
    if (pivot != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a[col * n + c], a[pivot * n + c]);
      std::swap(b[col], b[pivot]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r * n + col] / a[col * n + col];
      if (f == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double acc = b[i];
    for (std::size_t c = i + 1; c < n; ++c) acc -= a[i * n + c] * x[c];
    x[i] = acc / a[i * n + i];
  }
  return x;
}

/// Dense (D - alpha W) g = y.
inline std::vector<double> rank_oracle(const RegionGraph& g, const std::vector<double>& y,
                                       double alpha) {
  const int n = g.size();
  std::vector<double> a(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    double degree = 0.0;
    for (int j = 0; j < n; ++j) degree += g.weight(i, j);
    for (int j = 0; j < n; ++j) a[static_cast<std::size_t>(i) * n + j] = -alpha * g.weight(i, j);
    a[static_cast<std::size_t>(i) * n + i] = degree;
  }
  return dense_solve(std::move(a), y);
}

/// Random connected graph: a random spanning tree plus extra edges.
inline RegionGraph random_connected_graph(std::mt19937_64& rng, int n, double extra_density = 0.2) {
  RegionGraph g(n);
  auto unit = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  for (int i = 1; i < n; ++i) {
    const int parent = static_cast<int>(rng() % static_cast<std::uint64_t>(i));
    g.set_edge(i, parent, 0.05 + 0.95 * unit());
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (g.weight(i, j) == 0.0 && unit() < extra_density) g.set_edge(i, j, 0.05 + 0.95 * unit());
  return g;
}

/// All-pairs shortest paths by Floyd-Warshall; unreachable pairs are +inf.
inline std::vector<double> floyd_warshall(int n, const std::vector<std::tuple<int, int, double>>& edges) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> d(static_cast<std::size_t>(n) * n, inf);
  for (int i = 0; i < n; ++i) d[static_cast<std::size_t>(i) * n + i] = 0.0;
  for (const auto& [a, b, c] : edges) {
    auto& ab = d[static_cast<std::size_t>(a) * n + b];
    ab = std::min(ab, c);
    auto& ba = d[static_cast<std::size_t>(b) * n + a];
    ba = std::min(ba, c);
  }
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double via = d[static_cast<std::size_t>(i) * n + k] + d[static_cast<std::size_t>(k) * n + j];
        auto& ij = d[static_cast<std::size_t>(i) * n + j];
        if (via < ij) ij = via;
      }
  return d;
}

/// Number of integer offsets with dx^2 + dy^2 <= r^2.
inline long disk_count(int r) {
  long count = 0;
  for (int dy = -r; dy <= r; ++dy)
    for (int dx = -r; dx <= r; ++dx)
      if (dx * dx + dy * dy <= r * r) ++count;
  return count;
}

/// Least-squares slope of log y against log x.
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= n;
  my /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
    sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
  }
  return sxy / sxx;
}

/// Hoelder exponent at (x, y) by direct disk summation over a gray plane.
inline double density_at(const Raster& gray, int x, int y, const std::vector<int>& radii,
                         double floor) {
  std::vector<double> rs;
  std::vector<double> mu;
  for (int r : radii) {
    double sum = 0.0;
    for (int dy = -r; dy <= r; ++dy)
      for (int dx = -r; dx <= r; ++dx) {
        if (dx * dx + dy * dy > r * r) continue;
        const int px = x + dx;
        const int py = y + dy;
        if (px < 0 || py < 0 || px >= gray.width() || py >= gray.height()) continue;
        sum += std::max(gray.at(px, py, 0), floor);
      }
    rs.push_back(r);
    mu.push_back(sum);
  }
  return loglog_slope(rs, mu);
}

/// Expected |X - Y| for independent X ~ f1, Y ~ f2 on sorted support points,
/// via the integral of F1 (1 - F2) + F2 (1 - F1) between support points.
inline double expected_abs_difference(const std::vector<double>& f1, const std::vector<double>& f2,
                                      const std::vector<double>& centers) {
  double total = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  for (std::size_t i = 0; i + 1 < centers.size(); ++i) {
    c1 += f1[i];
    c2 += f2[i];
    total += (c1 * (1.0 - c2) + c2 * (1.0 - c1)) * (centers[i + 1] - centers[i]);
  }
  return total;
}

/// Precision / recall / FPR at threshold k/255 by recounting raw pixel sets.
struct Recount {
  double precision;
  double recall;
  double fpr;
};

inline Recount recount(const SaliencyMap& pred, const GroundTruthMask& gt, double threshold) {
  std::size_t predicted = 0;
  std::size_t hits = 0;
  std::size_t positives = 0;
  std::size_t false_pos = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const bool p = pred[i] >= threshold;
    positives += gt[i];
    predicted += p;
    hits += p && gt[i];
    false_pos += p && !gt[i];
  }
  const std::size_t negatives = pred.size() - positives;
  return {predicted == 0 ? 1.0 : static_cast<double>(hits) / predicted,
          static_cast<double>(hits) / positives,
          negatives == 0 ? 0.0 : static_cast<double>(false_pos) / negatives};
}

}  // namespace salpan::testing
