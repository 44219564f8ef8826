#include "fixtures.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace salpan::testing {

namespace {

using Color = std::array<double, 3>;

struct Shape {
  enum Kind { Disk, Square } kind;
  double cx, cy, r;  // square: r is the half side
  Color color;

  bool contains(double x, double y) const {
    if (kind == Disk) return (x - cx) * (x - cx) + (y - cy) * (y - cy) <= r * r;
    return std::abs(x - cx) <= r && std::abs(y - cy) <= r;
  }
};

// Background palette: muted tones; object palette: saturated tones.
constexpr std::array<Color, 5> kBackgrounds = {{{0.55, 0.60, 0.50},
                                                 {0.45, 0.50, 0.58},
                                                 {0.62, 0.57, 0.48},
                                                 {0.50, 0.55, 0.55},
                                                 {0.58, 0.52, 0.56}}};
constexpr std::array<Color, 5> kObjects = {{{0.85, 0.20, 0.15},
                                             {0.15, 0.30, 0.80},
                                             {0.95, 0.80, 0.10},
                                             {0.10, 0.65, 0.25},
                                             {0.80, 0.15, 0.70}}};

Fixture render(std::string name, int width, int height, const Color& bg,
               const std::vector<Shape>& shapes, std::mt19937_64& rng) {
  Raster rgb(width, height, ColorSpace::RGB);
  std::vector<std::uint8_t> gt(static_cast<std::size_t>(width) * height, 0);
  // Background: slow gradient, low-frequency waves and fine pixel grain.
  // Objects: their own color with a bold stripe pattern of a few pixels
  // period, so they differ from the background in both color and texture.
  const double fx = 2.0 + 4.0 * unit(rng);
  const double fy = 1.0 + 3.0 * unit(rng);
  const double phase = 6.283185307179586 * unit(rng);
  const double period = 7.0 + 5.0 * unit(rng);
  const double angle = 3.141592653589793 * unit(rng);
  const double ca = std::cos(angle) / period;
  const double sa = std::sin(angle) / period;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const double u = static_cast<double>(x) / width;
      const double v = static_cast<double>(y) / height;
      const double wave = 0.05 * std::sin(6.283185307179586 * (fx * u + fy * v) + phase);
      const double grad = 0.06 * (u - 0.5);
      std::size_t i = static_cast<std::size_t>(y) * width + x;
      Color c = bg;
      double texture = wave + grad;
      bool inside = false;
      for (const auto& s : shapes) {
        if (s.contains(x + 0.5, y + 0.5)) {
          c = s.color;
          const double stripe = std::sin(6.283185307179586 * (ca * x + sa * y));
          texture = 0.08 * (stripe > 0.0 ? 1.0 : -1.0);
          inside = true;
        }
      }
      gt[i] = inside ? 1 : 0;
      const double noise = 0.06 * (unit(rng) - 0.5);
      for (int ch = 0; ch < 3; ++ch)
        rgb.at(x, y, ch) = std::clamp(c[ch] + texture + noise, 0.0, 1.0);
    }
  }
  return {std::move(name), std::move(rgb), GroundTruthMask(width, height, std::move(gt))};
}

}  // namespace

std::vector<double> random_values(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
  std::vector<double> out(n);
  for (double& v : out) v = lo + (hi - lo) * unit(rng);
  return out;
}

Fixture make_fixture(int index, int width, int height) {
  std::mt19937_64 rng(0x5a1a0000u + static_cast<unsigned>(index));
  const double w = width;
  const double h = height;
  const Color& bg = kBackgrounds[index % kBackgrounds.size()];
  const Color& fg = kObjects[index % kObjects.size()];
  const Color& fg2 = kObjects[(index + 2) % kObjects.size()];
  auto jitter = [&](double span) { return span * (unit(rng) - 0.5); };
  std::vector<Shape> shapes;
  std::string name;
  switch (index % 3) {
    case 0:
      name = "disk";
      shapes.push_back({Shape::Disk, 0.5 * w + jitter(0.3 * w), 0.5 * h + jitter(0.2 * h),
                        (0.16 + 0.06 * unit(rng)) * h, fg});
      break;
    case 1:
      name = "square";
      shapes.push_back({Shape::Square, 0.5 * w + jitter(0.3 * w), 0.5 * h + jitter(0.2 * h),
                        (0.14 + 0.06 * unit(rng)) * h, fg});
      break;
    default:
      name = "multi";
      shapes.push_back({Shape::Disk, 0.32 * w + jitter(0.1 * w), 0.5 * h + jitter(0.2 * h),
                        (0.12 + 0.04 * unit(rng)) * h, fg});
      shapes.push_back({Shape::Square, 0.68 * w + jitter(0.1 * w), 0.5 * h + jitter(0.2 * h),
                        (0.10 + 0.04 * unit(rng)) * h, fg2});
      break;
  }
  return render("fixture_" + std::to_string(index) + "_" + name, width, height, bg, shapes, rng);
}

Fixture make_disk_on_flat(int width, int height) {
  Raster rgb(width, height, ColorSpace::RGB);
  std::vector<std::uint8_t> gt(static_cast<std::size_t>(width) * height, 0);
  const double cx = 0.5 * width;
  const double cy = 0.5 * height;
  const double r = 0.25 * std::min(width, height);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) {
      const bool inside = (x + 0.5 - cx) * (x + 0.5 - cx) + (y + 0.5 - cy) * (y + 0.5 - cy) <= r * r;
      gt[static_cast<std::size_t>(y) * width + x] = inside ? 1 : 0;
      const Color c = inside ? Color{0.85, 0.2, 0.15} : Color{0.5, 0.5, 0.5};
      for (int ch = 0; ch < 3; ++ch) rgb.at(x, y, ch) = c[ch];
    }
  return {"disk_on_flat", std::move(rgb), GroundTruthMask(width, height, std::move(gt))};
}

TempDir::TempDir(const std::string& tag) {
  std::random_device rd;
  const auto base = std::filesystem::temp_directory_path();
  for (;;) {
    path_ = base / ("salpan-" + tag + "-" + std::to_string(rd()));
    if (std::filesystem::create_directory(path_)) break;
  }
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

}  // namespace salpan::testing
