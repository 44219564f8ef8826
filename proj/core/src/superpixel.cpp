#include "salpan/superpixel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <set>
#include <string>

#include "salpan/image_io.hpp"

namespace salpan {

bool Segmentation::is_border(int region) const {
  return std::binary_search(border_regions.begin(), border_regions.end(), region);
}

Segmentation make_segmentation(const Raster& lab, std::vector<int> labels) {
  if (lab.space() != ColorSpace::LAB) throw InvalidSpace("segmentation expects a LAB raster");
  const int w = lab.width();
  const int h = lab.height();
  if (labels.size() != lab.pixel_count()) throw InvalidArgument("label image size mismatch");

  Segmentation seg;
  seg.width = w;
  seg.height = h;
  seg.region_count = labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
  const int n = seg.region_count;
  seg.region_mean_lab.assign(n, {0.0, 0.0, 0.0});
  seg.region_centroid.assign(n, {0.0, 0.0});
  seg.region_size.assign(n, 0);
  std::vector<std::set<int>> adj(n);
  std::vector<char> border(n, 0);

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      const int l = labels[i];
      if (l < 0 || l >= n) throw InvalidArgument("label out of range");
      for (int c = 0; c < 3; ++c) seg.region_mean_lab[l][c] += lab.at(x, y, c);
      seg.region_centroid[l][0] += x;
      seg.region_centroid[l][1] += y;
      ++seg.region_size[l];
      if (x == 0 || y == 0 || x == w - 1 || y == h - 1) border[l] = 1;
      if (x + 1 < w && labels[i + 1] != l) {
        adj[l].insert(labels[i + 1]);
        adj[labels[i + 1]].insert(l);
      }
      if (y + 1 < h && labels[i + w] != l) {
        adj[l].insert(labels[i + w]);
        adj[labels[i + w]].insert(l);
      }
    }
  }
  seg.adjacency.resize(n);
  for (int r = 0; r < n; ++r) {
    if (seg.region_size[r] == 0)
      throw InvalidArgument("region " + std::to_string(r) + " is empty");
    const double size = seg.region_size[r];
    for (auto& c : seg.region_mean_lab[r]) c /= size;
    for (auto& c : seg.region_centroid[r]) c /= size;
    seg.adjacency[r].assign(adj[r].begin(), adj[r].end());
    if (border[r]) seg.border_regions.push_back(r);
  }
  seg.labels = std::move(labels);
  return seg;
}

namespace {

struct Center {
  double l, a, b, x, y;
};

// Union-find over connected fragments.
struct DisjointSets {
  std::vector<int> parent;
  std::vector<int> size;
  explicit DisjointSets(int n) : parent(n), size(n, 1) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int v) {
    while (parent[v] != v) {
      parent[v] = parent[parent[v]];
      v = parent[v];
    }
    return v;
  }
  // Attaches b's root under a's root.
  void attach(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    parent[b] = a;
    size[a] += size[b];
  }
};

double gradient(const Raster& lab, int x, int y) {
  const int w = lab.width();
  const int h = lab.height();
  const int x0 = std::max(x - 1, 0), x1 = std::min(x + 1, w - 1);
  const int y0 = std::max(y - 1, 0), y1 = std::min(y + 1, h - 1);
  double g = 0.0;
  for (int c = 0; c < 3; ++c) {
    const double dx = lab.at(x1, y, c) - lab.at(x0, y, c);
    const double dy = lab.at(x, y1, c) - lab.at(x, y0, c);
    g += dx * dx + dy * dy;
  }
  return g;
}

// Label 4-connected components of `labels`; returns component id per pixel
// (ids in row-major order of first pixel) and the component count.
int connected_components(const std::vector<int>& labels, int w, int h,
                         std::vector<int>& comp) {
  comp.assign(labels.size(), -1);
  std::vector<std::size_t> stack;
  int count = 0;
  for (std::size_t start = 0; start < labels.size(); ++start) {
    if (comp[start] >= 0) continue;
    const int id = count++;
    comp[start] = id;
    stack.push_back(start);
    while (!stack.empty()) {
      const std::size_t p = stack.back();
      stack.pop_back();
      const int x = static_cast<int>(p % w);
      const int y = static_cast<int>(p / w);
      auto visit = [&](std::size_t q) {
        if (comp[q] < 0 && labels[q] == labels[p]) {
          comp[q] = id;
          stack.push_back(q);
        }
      };
      if (x > 0) visit(p - 1);
      if (x + 1 < w) visit(p + 1);
      if (y > 0) visit(p - w);
      if (y + 1 < h) visit(p + w);
    }
  }
  return count;
}

}  // namespace

Segmentation slic(const Raster& lab, const SlicParams& params) {
  if (lab.space() != ColorSpace::LAB) throw InvalidSpace("slic expects a LAB raster");
  const int w = lab.width();
  const int h = lab.height();
  const std::size_t npix = lab.pixel_count();
  if (params.k < 2 || static_cast<std::size_t>(params.k) > npix)
    throw InvalidArgument("slic: k must lie in [2, pixel count], got " + std::to_string(params.k));
  if (!(params.compactness > 0.0)) throw InvalidArgument("slic: compactness must be positive");

  const double step = std::sqrt(static_cast<double>(npix) / params.k);
  const int nx = std::clamp(static_cast<int>(std::lround(w / step)), 1, w);
  const int ny = std::clamp(static_cast<int>(std::lround(h / step)), 1, h);
  const double cell_w = static_cast<double>(w) / nx;
  const double cell_h = static_cast<double>(h) / ny;
  const bool perturb = cell_w >= 3.0 && cell_h >= 3.0;

  std::vector<Center> centers;
  centers.reserve(static_cast<std::size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      int cx = std::min(static_cast<int>((i + 0.5) * cell_w), w - 1);
      int cy = std::min(static_cast<int>((j + 0.5) * cell_h), h - 1);
      if (perturb) {
        double best = gradient(lab, cx, cy);
        const int ox = cx, oy = cy;
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            const int x = ox + dx, y = oy + dy;
            if (x < 0 || y < 0 || x >= w || y >= h) continue;
            const double g = gradient(lab, x, y);
            if (g < best) {
              best = g;
              cx = x;
              cy = y;
            }
          }
        }
      }
      centers.push_back({lab.at(cx, cy, 0), lab.at(cx, cy, 1), lab.at(cx, cy, 2),
                         static_cast<double>(cx), static_cast<double>(cy)});
    }
  }

  const double spatial = (params.compactness / step) * (params.compactness / step);
  const int reach = static_cast<int>(std::ceil(std::max(cell_w, cell_h)));
  std::vector<int> labels(npix, -1);
  std::vector<double> dist(npix);

  for (int iter = 0; iter < params.iterations; ++iter) {
    std::fill(dist.begin(), dist.end(), std::numeric_limits<double>::infinity());
    for (std::size_t k = 0; k < centers.size(); ++k) {
      const Center& c = centers[k];
      const int x0 = std::max(0, static_cast<int>(c.x) - reach);
      const int x1 = std::min(w - 1, static_cast<int>(c.x) + reach);
      const int y0 = std::max(0, static_cast<int>(c.y) - reach);
      const int y1 = std::min(h - 1, static_cast<int>(c.y) + reach);
      for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
          const std::size_t p = static_cast<std::size_t>(y) * w + x;
          const double dl = lab.at(x, y, 0) - c.l;
          const double da = lab.at(x, y, 1) - c.a;
          const double db = lab.at(x, y, 2) - c.b;
          const double dx = x - c.x;
          const double dy = y - c.y;
          const double d = dl * dl + da * da + db * db + spatial * (dx * dx + dy * dy);
          if (d < dist[p]) {
            dist[p] = d;
            labels[p] = static_cast<int>(k);
          }
        }
      }
    }
    std::vector<Center> sums(centers.size(), {0, 0, 0, 0, 0});
    std::vector<int> counts(centers.size(), 0);
    for (std::size_t p = 0; p < npix; ++p) {
      const int k = labels[p];
      if (k < 0) continue;
      const int x = static_cast<int>(p % w);
      const int y = static_cast<int>(p / w);
      sums[k].l += lab.at(x, y, 0);
      sums[k].a += lab.at(x, y, 1);
      sums[k].b += lab.at(x, y, 2);
      sums[k].x += x;
      sums[k].y += y;
      ++counts[k];
    }
    for (std::size_t k = 0; k < centers.size(); ++k) {
      if (counts[k] == 0) continue;
      const double n = counts[k];
      centers[k] = {sums[k].l / n, sums[k].a / n, sums[k].b / n, sums[k].x / n, sums[k].y / n};
    }
  }

  // Pixels outside every search window take the nearest center spatially.
  for (std::size_t p = 0; p < npix; ++p) {
    if (labels[p] >= 0) continue;
    const double x = static_cast<double>(p % w);
    const double y = static_cast<double>(p / w);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < centers.size(); ++k) {
      const double d = (x - centers[k].x) * (x - centers[k].x) + (y - centers[k].y) * (y - centers[k].y);
      if (d < best) {
        best = d;
        labels[p] = static_cast<int>(k);
      }
    }
  }

  // Connectivity enforcement.
  std::vector<int> comp;
  const int ncomp = connected_components(labels, w, h, comp);
  DisjointSets sets(ncomp);
  for (std::size_t p = 0; p < npix; ++p) sets.size[comp[p]] = 0;
  for (std::size_t p = 0; p < npix; ++p) ++sets.size[comp[p]];
  const std::vector<int> initial_size = sets.size;
  const int min_size =
      std::max(1, static_cast<int>(npix / (static_cast<std::size_t>(nx) * ny) / 4));

  std::vector<std::set<int>> comp_adj(ncomp);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t p = static_cast<std::size_t>(y) * w + x;
      if (x + 1 < w && comp[p + 1] != comp[p]) {
        comp_adj[comp[p]].insert(comp[p + 1]);
        comp_adj[comp[p + 1]].insert(comp[p]);
      }
      if (y + 1 < h && comp[p + w] != comp[p]) {
        comp_adj[comp[p]].insert(comp[p + w]);
        comp_adj[comp[p + w]].insert(comp[p]);
      }
    }
  }
  for (int c = 0; c < ncomp; ++c) {
    if (initial_size[c] >= min_size) continue;
    const int root = sets.find(c);
    int target = -1;
    int target_size = -1;
    for (int nb : comp_adj[c]) {
      const int r = sets.find(nb);
      if (r == root) continue;
      if (sets.size[r] > target_size || (sets.size[r] == target_size && r < target)) {
        target = r;
        target_size = sets.size[r];
      }
    }
    if (target >= 0) sets.attach(target, root);
  }

  // Relabel roots in row-major order of first appearance.
  std::vector<int> relabel(ncomp, -1);
  int next = 0;
  for (std::size_t p = 0; p < npix; ++p) {
    const int r = sets.find(comp[p]);
    if (relabel[r] < 0) relabel[r] = next++;
    labels[p] = relabel[r];
  }
  return make_segmentation(lab, std::move(labels));
}

RegionGraph::RegionGraph(int n)
    : n_(n), w_(static_cast<std::size_t>(n) * n, 0.0), degree_(n, 0.0), neighbors_(n) {}

void RegionGraph::set_edge(int i, int j, double w) {
  if (i == j) throw InvalidArgument("region graph edges must join distinct nodes");
  const std::size_t ij = static_cast<std::size_t>(i) * n_ + j;
  const std::size_t ji = static_cast<std::size_t>(j) * n_ + i;
  const double old = w_[ij];
  auto& ni = neighbors_[i];
  if (!std::binary_search(ni.begin(), ni.end(), j)) {
    ni.insert(std::upper_bound(ni.begin(), ni.end(), j), j);
    auto& nj = neighbors_[j];
    nj.insert(std::upper_bound(nj.begin(), nj.end(), i), i);
  }
  w_[ij] = w;
  w_[ji] = w;
  degree_[i] += w - old;
  degree_[j] += w - old;
}

double affinity(double distance, double sigma2) { return std::exp(-distance / sigma2); }

std::array<double, 3> scaled_lab(const std::array<double, 3>& lab) {
  return {lab[0] / 100.0, (lab[1] + 128.0) / 255.0, (lab[2] + 128.0) / 255.0};
}

RegionGraph build_graph(const Segmentation& seg, double sigma2) {
  if (!(sigma2 > 0.0)) throw InvalidArgument("build_graph: sigma2 must be positive");
  const int n = seg.region_count;
  std::vector<std::set<int>> links(n);
  for (int i = 0; i < n; ++i) {
    for (int j : seg.adjacency[i]) {
      links[i].insert(j);
      for (int k : seg.adjacency[j])
        if (k != i) links[i].insert(k);
    }
  }
  for (std::size_t a = 0; a < seg.border_regions.size(); ++a)
    for (std::size_t b = a + 1; b < seg.border_regions.size(); ++b) {
      links[seg.border_regions[a]].insert(seg.border_regions[b]);
      links[seg.border_regions[b]].insert(seg.border_regions[a]);
    }

  std::vector<std::array<double, 3>> feat(n);
  for (int i = 0; i < n; ++i) feat[i] = scaled_lab(seg.region_mean_lab[i]);

  RegionGraph g(n);
  for (int i = 0; i < n; ++i) {
    for (int j : links[i]) {
      if (j <= i) continue;
      const double d = std::sqrt((feat[i][0] - feat[j][0]) * (feat[i][0] - feat[j][0]) +
                                 (feat[i][1] - feat[j][1]) * (feat[i][1] - feat[j][1]) +
                                 (feat[i][2] - feat[j][2]) * (feat[i][2] - feat[j][2]));
      g.set_edge(i, j, affinity(d, sigma2));
    }
  }
  return g;
}

void dump_segmentation(const std::filesystem::path& label_pgm,
                       const std::filesystem::path& edge_list, const Segmentation& seg,
                       const RegionGraph& graph) {
  io::write_label_pgm(label_pgm, seg.width, seg.height, seg.labels);
  std::string text;
  char line[96];
  for (int i = 0; i < graph.size(); ++i)
    for (int j : graph.neighbors(i)) {
      if (j <= i) continue;
      std::snprintf(line, sizeof line, "%d %d %.6g\n", i, j, graph.weight(i, j));
      text += line;
    }
  io::write_text_atomic(edge_list, text);
}

}  // namespace salpan
