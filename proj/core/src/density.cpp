#include "salpan/density.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <set>
#include <string>
#include <tuple>

#include "salpan/image_io.hpp"
#include "salpan/parallel.hpp"

namespace salpan {

SaliencyMap DensityMap::to_map() const { return normalize(SaliencyMap(width, height, d)); }

std::vector<int> default_density_radii() { return {1, 2, 3, 5, 7, 10, 14}; }

namespace {

int isqrt(int v) {
  int r = static_cast<int>(std::sqrt(static_cast<double>(v)));
  while (r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  return r;
}

void check_radii(std::span<const int> radii) {
  if (radii.size() < 3) throw InvalidArgument("density_map needs at least 3 radii");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (radii[i] < 1) throw InvalidArgument("density radii must be >= 1");
    if (i > 0 && radii[i] <= radii[i - 1])
      throw InvalidArgument("density radii must be strictly increasing");
  }
}

}  // namespace

DensityMap density_map(const Raster& gray, std::span<const int> radii, std::size_t threads) {
  if (gray.space() != ColorSpace::GRAY) throw InvalidSpace("density_map expects a GRAY raster");
  check_radii(radii);
  const int w = gray.width();
  const int h = gray.height();
  const int nr = static_cast<int>(radii.size());
  const int rmax = radii.back();

  std::vector<double> img(gray.pixel_count());
  auto src = gray.data();
  for (std::size_t i = 0; i < img.size(); ++i) img[i] = std::max(src[i], kDensityFloor);

  // half_width[k][dy + rmax]: horizontal half-extent of disk k on row offset dy,
  // or -1 when the row is outside the disk.
  std::vector<std::vector<int>> half_width(nr, std::vector<int>(2 * rmax + 1, -1));
  for (int k = 0; k < nr; ++k) {
    const int r = radii[k];
    for (int dy = -r; dy <= r; ++dy) half_width[k][dy + rmax] = isqrt(r * r - dy * dy);
  }

  // Least-squares slope weights: slope = sum_k c_k * log(mu_k).
  std::vector<double> coef(nr);
  double mean_log_r = 0.0;
  for (int r : radii) mean_log_r += std::log(static_cast<double>(r));
  mean_log_r /= nr;
  double sxx = 0.0;
  for (int r : radii) sxx += (std::log(static_cast<double>(r)) - mean_log_r) *
                             (std::log(static_cast<double>(r)) - mean_log_r);
  for (int k = 0; k < nr; ++k) coef[k] = (std::log(static_cast<double>(radii[k])) - mean_log_r) / sxx;

  DensityMap out;
  out.width = w;
  out.height = h;
  out.radii.assign(radii.begin(), radii.end());
  out.d.assign(img.size(), 0.0);

  parallel_for(0, static_cast<std::size_t>(h), threads, [&](std::size_t row) {
    const int y = static_cast<int>(row);
    std::vector<double> mu(nr);
    for (int x = 0; x < w; ++x) {
      std::fill(mu.begin(), mu.end(), 0.0);
      for (int dy = -rmax; dy <= rmax; ++dy) {
        const int yy = y + dy;
        if (yy < 0 || yy >= h) continue;
        const double* line = img.data() + static_cast<std::size_t>(yy) * w;
        double running = 0.0;
        int covered = -1;  // half-extent already summed on this row
        for (int k = 0; k < nr; ++k) {
          const int hw = half_width[k][dy + rmax];
          if (hw < 0) continue;
          // Grow outward from x so the summation order depends only on
          // offsets, never on absolute position.
          for (int off = covered + 1; off <= hw; ++off) {
            if (off == 0) {
              running += line[x];
              continue;
            }
            if (x - off >= 0) running += line[x - off];
            if (x + off < w) running += line[x + off];
          }
          covered = std::max(covered, hw);
          mu[k] += running;
        }
      }
      double slope = 0.0;
      for (int k = 0; k < nr; ++k) slope += coef[k] * std::log(mu[k]);
      out.d[static_cast<std::size_t>(y) * w + x] = slope;
    }
  });
  return out;
}

namespace {

constexpr int kFeatures = 4;
using Feature = std::array<double, kFeatures>;

struct Cluster {
  Feature sum{};
  double count = 0.0;
  int rep = 0;  // smallest row-major pixel index in the cluster
  int version = 0;
  bool alive = true;
  std::set<int> neighbors;
};

double ward_cost(const Cluster& a, const Cluster& b) {
  double dist2 = 0.0;
  for (int f = 0; f < kFeatures; ++f) {
    const double diff = a.sum[f] / a.count - b.sum[f] / b.count;
    dist2 += diff * diff;
  }
  return a.count * b.count / (a.count + b.count) * dist2;
}

struct Candidate {
  double cost;
  int rep_lo;
  int rep_hi;
  int a;
  int b;
  int version_a;
  int version_b;
};

struct CandidateAfter {
  bool operator()(const Candidate& x, const Candidate& y) const {
    return std::tie(x.cost, x.rep_lo, x.rep_hi) > std::tie(y.cost, y.rep_lo, y.rep_hi);
  }
};

Candidate make_candidate(const std::vector<Cluster>& cl, int a, int b) {
  const int lo = std::min(cl[a].rep, cl[b].rep);
  const int hi = std::max(cl[a].rep, cl[b].rep);
  return {ward_cost(cl[a], cl[b]), lo, hi, a, b, cl[a].version, cl[b].version};
}

}  // namespace

RegionPartition segment_regions(const Raster& lab, const DensityMap& dmap,
                                const MergeParams& params, std::span<const int> atoms) {
  if (lab.space() != ColorSpace::LAB) throw InvalidSpace("segment_regions expects a LAB raster");
  const int w = lab.width();
  const int h = lab.height();
  const std::size_t npix = lab.pixel_count();
  if (dmap.width != w || dmap.height != h)
    throw InvalidArgument("segment_regions: density map size mismatch");
  if (atoms.size() != npix) throw InvalidArgument("segment_regions: atom label size mismatch");
  if (params.regions < 2) throw InvalidArgument("segment_regions: k_regions must be >= 2");
  if (static_cast<std::size_t>(params.regions) > npix)
    throw InvalidArgument("segment_regions: k_regions exceeds pixel count");

  const int natoms = *std::max_element(atoms.begin(), atoms.end()) + 1;
  std::vector<Cluster> cl(natoms);
  for (auto& c : cl) c.rep = static_cast<int>(npix);
  for (std::size_t p = 0; p < npix; ++p) {
    const int a = atoms[p];
    if (a < 0) throw InvalidArgument("segment_regions: negative atom label");
    const int x = static_cast<int>(p % w);
    const int y = static_cast<int>(p / w);
    const auto scaled = scaled_lab({lab.at(x, y, 0), lab.at(x, y, 1), lab.at(x, y, 2)});
    Cluster& c = cl[a];
    c.sum[0] += scaled[0];
    c.sum[1] += scaled[1];
    c.sum[2] += scaled[2];
    c.sum[3] += params.density_weight * dmap.d[p];
    c.count += 1.0;
    c.rep = std::min(c.rep, static_cast<int>(p));
    if (x + 1 < w && atoms[p + 1] != a) {
      c.neighbors.insert(atoms[p + 1]);
      cl[atoms[p + 1]].neighbors.insert(a);
    }
    if (y + 1 < h && atoms[p + w] != a) {
      c.neighbors.insert(atoms[p + w]);
      cl[atoms[p + w]].neighbors.insert(a);
    }
  }
  int alive = 0;
  for (auto& c : cl) {
    if (c.count == 0.0) {
      c.alive = false;
    } else {
      ++alive;
    }
  }

  std::priority_queue<Candidate, std::vector<Candidate>, CandidateAfter> heap;
  for (int a = 0; a < natoms; ++a)
    for (int b : cl[a].neighbors)
      if (a < b) heap.push(make_candidate(cl, a, b));

  std::vector<int> absorbed_into(natoms);
  for (int a = 0; a < natoms; ++a) absorbed_into[a] = a;

  while (alive > params.regions && !heap.empty()) {
    const Candidate top = heap.top();
    heap.pop();
    if (!cl[top.a].alive || !cl[top.b].alive || cl[top.a].version != top.version_a ||
        cl[top.b].version != top.version_b)
      continue;
    // Keep the cluster holding the smaller representative.
    int keep = top.a;
    int gone = top.b;
    if (cl[gone].rep < cl[keep].rep) std::swap(keep, gone);
    Cluster& k = cl[keep];
    Cluster& g = cl[gone];
    for (int f = 0; f < kFeatures; ++f) k.sum[f] += g.sum[f];
    k.count += g.count;
    k.rep = std::min(k.rep, g.rep);
    ++k.version;
    g.alive = false;
    absorbed_into[gone] = keep;
    for (int nb : g.neighbors) {
      if (nb == keep) continue;
      cl[nb].neighbors.erase(gone);
      cl[nb].neighbors.insert(keep);
      k.neighbors.insert(nb);
    }
    k.neighbors.erase(gone);
    g.neighbors.clear();
    --alive;
    for (int nb : k.neighbors) heap.push(make_candidate(cl, keep, nb));
  }

  auto root = [&](int a) {
    while (absorbed_into[a] != a) a = absorbed_into[a];
    return a;
  };
  RegionPartition out;
  out.width = w;
  out.height = h;
  out.labels.assign(npix, -1);
  std::vector<int> relabel(natoms, -1);
  for (std::size_t p = 0; p < npix; ++p) {
    const int r = root(atoms[p]);
    if (relabel[r] < 0) {
      relabel[r] = out.region_count++;
      out.region_size.push_back(0);
    }
    out.labels[p] = relabel[r];
    ++out.region_size[relabel[r]];
  }
  return out;
}

}  // namespace salpan

namespace salpan {

RegionPartition segment_regions(const Raster& lab, const DensityMap& dmap,
                                const MergeParams& params) {
  std::vector<int> atoms(lab.pixel_count());
  for (std::size_t p = 0; p < atoms.size(); ++p) atoms[p] = static_cast<int>(p);
  return segment_regions(lab, dmap, params, atoms);
}

double density_distance(std::span<const double> f1, std::span<const double> f2,
                        std::span<const double> centers) {
  double total = 0.0;
  for (std::size_t i = 0; i < f1.size(); ++i) {
    if (f1[i] == 0.0) continue;
    for (std::size_t j = 0; j < f2.size(); ++j)
      total += f1[i] * f2[j] * std::abs(centers[i] - centers[j]);
  }
  return total;
}

RegionContrast region_contrast(const RegionPartition& partition, const DensityMap& dmap,
                               int bins, Diagnostics* diag) {
  if (bins < 1) throw InvalidArgument("region_contrast: bins must be >= 1");
  if (dmap.width != partition.width || dmap.height != partition.height)
    throw InvalidArgument("region_contrast: density map size mismatch");
  const int n = partition.region_count;
  const std::size_t npix = partition.labels.size();

  const auto [lo_it, hi_it] = std::minmax_element(dmap.d.begin(), dmap.d.end());
  const double lo = *lo_it;
  const double span = *hi_it - lo;

  RegionContrast rc;
  rc.bin_centers.resize(bins);
  for (int b = 0; b < bins; ++b) rc.bin_centers[b] = lo + (b + 0.5) * span / bins;
  rc.histograms.assign(n, std::vector<double>(bins, 0.0));
  for (std::size_t p = 0; p < npix; ++p) {
    int b = 0;
    if (span > 0.0)
      b = std::min(bins - 1, static_cast<int>((dmap.d[p] - lo) / span * bins));
    rc.histograms[partition.labels[p]][b] += 1.0;
  }
  rc.weights.resize(n);
  for (int r = 0; r < n; ++r) {
    const double size = partition.region_size[r];
    for (double& f : rc.histograms[r]) f /= size;
    rc.weights[r] = size / static_cast<double>(npix);
  }

  rc.saliency.assign(n, 0.0);
  if (n < 2) {
    warn(diag, "region_contrast", "single region; contrast map is all zeros");
  } else {
    std::vector<double> dist(static_cast<std::size_t>(n) * n, 0.0);
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b) {
        const double d = density_distance(rc.histograms[a], rc.histograms[b], rc.bin_centers);
        dist[static_cast<std::size_t>(a) * n + b] = d;
        dist[static_cast<std::size_t>(b) * n + a] = d;
      }
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        if (i != k) rc.saliency[k] += rc.weights[i] * dist[static_cast<std::size_t>(k) * n + i];
  }
  rc.map = normalize(paint_regions(partition.width, partition.height, partition.labels, rc.saliency),
                     diag);
  return rc;
}

int otsu_threshold(const SaliencyMap& s) {
  std::array<double, 256> hist{};
  for (double v : s.values()) hist[io::quantize(v)] += 1.0;
  if (std::count_if(hist.begin(), hist.end(), [](double c) { return c > 0.0; }) < 2) return -1;

  const double total = static_cast<double>(s.size());
  double sum_all = 0.0;
  for (int i = 0; i < 256; ++i) sum_all += i * hist[i];
  double w0 = 0.0;
  double sum0 = 0.0;
  double best = -1.0;
  int best_t = 0;
  for (int t = 0; t < 255; ++t) {
    w0 += hist[t];
    sum0 += t * hist[t];
    const double w1 = total - w0;
    if (w0 == 0.0 || w1 == 0.0) continue;
    const double m0 = sum0 / w0;
    const double m1 = (sum_all - sum0) / w1;
    const double between = w0 * w1 * (m0 - m1) * (m0 - m1);
    if (between > best) {
      best = between;
      best_t = t;
    }
  }
  return best_t;
}

GroundTruthMask binarize_proposals(const SaliencyMap& s, Diagnostics* diag) {
  const int t = otsu_threshold(s);
  std::vector<std::uint8_t> mask(s.size(), 1);
  if (t < 0) {
    warn(diag, "binarize_proposals", "constant map; proposing the whole image");
  } else {
    for (std::size_t i = 0; i < s.size(); ++i) mask[i] = io::quantize(s[i]) > t ? 1 : 0;
  }
  return {s.width(), s.height(), std::move(mask)};
}

}  // namespace salpan
