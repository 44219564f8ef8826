#include "salpan/raster.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace salpan {

namespace {

void check_dims(int width, int height) {
  if (width < 1 || height < 1)
    throw InvalidArgument("raster dimensions must be positive, got " + std::to_string(width) +
                          "x" + std::to_string(height));
}

// sRGB companding.
double srgb_to_linear(double c) {
  return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

double linear_to_srgb(double c) {
  return c <= 0.0031308 ? 12.92 * c : 1.055 * std::pow(c, 1.0 / 2.4) - 0.055;
}

constexpr double kXn = 0.95047;
constexpr double kYn = 1.0;
constexpr double kZn = 1.08883;
constexpr double kDelta = 6.0 / 29.0;

double lab_f(double t) {
  return t > kDelta * kDelta * kDelta ? std::cbrt(t) : t / (3.0 * kDelta * kDelta) + 4.0 / 29.0;
}

double lab_f_inv(double t) {
  return t > kDelta ? t * t * t : 3.0 * kDelta * kDelta * (t - 4.0 / 29.0);
}

}  // namespace

int channel_count(ColorSpace space) noexcept { return space == ColorSpace::GRAY ? 1 : 3; }

Raster::Raster(int width, int height, ColorSpace space)
    : width_(width), height_(height), channels_(channel_count(space)), space_(space) {
  check_dims(width, height);
  data_.assign(pixel_count() * channels_, 0.0);
}

Raster::Raster(int width, int height, ColorSpace space, std::vector<double> data)
    : width_(width), height_(height), channels_(channel_count(space)), space_(space),
      data_(std::move(data)) {
  check_dims(width, height);
  if (data_.size() != pixel_count() * channels_)
    throw InvalidArgument("raster data length " + std::to_string(data_.size()) +
                          " does not match " + std::to_string(width) + "x" +
                          std::to_string(height) + "x" + std::to_string(channels_));
  for (double v : data_)
    if (!std::isfinite(v)) throw InvalidArgument("raster samples must be finite");
  if (space_ != ColorSpace::LAB)
    for (double v : data_)
      if (v < 0.0 || v > 1.0) throw InvalidArgument("RGB and GRAY samples must lie in [0,1]");
}

std::vector<double> Raster::plane(int c) const {
  std::vector<double> out(pixel_count());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = data_[i * channels_ + c];
  return out;
}

SaliencyMap::SaliencyMap(int width, int height, double fill)
    : width_(width), height_(height) {
  check_dims(width, height);
  values_.assign(static_cast<std::size_t>(width) * height, fill);
}

SaliencyMap::SaliencyMap(int width, int height, std::vector<double> values)
    : width_(width), height_(height), values_(std::move(values)) {
  check_dims(width, height);
  if (values_.size() != static_cast<std::size_t>(width) * height)
    throw InvalidArgument("saliency map length does not match dimensions");
}

double SaliencyMap::min() const { return *std::min_element(values_.begin(), values_.end()); }
double SaliencyMap::max() const { return *std::max_element(values_.begin(), values_.end()); }

double SaliencyMap::mean() const {
  return std::accumulate(values_.begin(), values_.end(), 0.0) /
         static_cast<double>(values_.size());
}

bool SaliencyMap::is_constant() const {
  return std::all_of(values_.begin(), values_.end(),
                     [first = values_.front()](double v) { return v == first; });
}

GroundTruthMask::GroundTruthMask(int width, int height, std::vector<std::uint8_t> values)
    : width_(width), height_(height), values_(std::move(values)) {
  check_dims(width, height);
  if (values_.size() != static_cast<std::size_t>(width) * height)
    throw InvalidArgument("mask length does not match dimensions");
  for (auto v : values_)
    if (v > 1) throw InvalidArgument("mask values must be 0 or 1");
}

std::size_t GroundTruthMask::positives() const noexcept {
  return static_cast<std::size_t>(std::count(values_.begin(), values_.end(), std::uint8_t{1}));
}

SaliencyMap GroundTruthMask::to_map() const {
  std::vector<double> v(values_.begin(), values_.end());
  return {width_, height_, std::move(v)};
}

GroundTruthMask threshold_mask(const SaliencyMap& m, double threshold) {
  std::vector<std::uint8_t> out(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) out[i] = m[i] >= threshold ? 1 : 0;
  return {m.width(), m.height(), std::move(out)};
}

Raster to_gray(const Raster& rgb) {
  if (rgb.space() != ColorSpace::RGB) throw InvalidSpace("to_gray expects an RGB raster");
  Raster out(rgb.width(), rgb.height(), ColorSpace::GRAY);
  auto src = rgb.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < out.pixel_count(); ++i)
    dst[i] = 0.299 * src[3 * i] + 0.587 * src[3 * i + 1] + 0.114 * src[3 * i + 2];
  return out;
}

Raster rgb_to_lab(const Raster& rgb) {
  if (rgb.space() != ColorSpace::RGB) throw InvalidSpace("rgb_to_lab expects an RGB raster");
  Raster out(rgb.width(), rgb.height(), ColorSpace::LAB);
  auto src = rgb.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < rgb.pixel_count(); ++i) {
    const double r = srgb_to_linear(src[3 * i]);
    const double g = srgb_to_linear(src[3 * i + 1]);
    const double b = srgb_to_linear(src[3 * i + 2]);
    const double x = 0.4124564 * r + 0.3575761 * g + 0.1804375 * b;
    const double y = 0.2126729 * r + 0.7151522 * g + 0.0721750 * b;
    const double z = 0.0193339 * r + 0.1191920 * g + 0.9503041 * b;
    const double fx = lab_f(x / kXn);
    const double fy = lab_f(y / kYn);
    const double fz = lab_f(z / kZn);
    dst[3 * i] = 116.0 * fy - 16.0;
    dst[3 * i + 1] = 500.0 * (fx - fy);
    dst[3 * i + 2] = 200.0 * (fy - fz);
  }
  return out;
}

Raster lab_to_rgb(const Raster& lab) {
  if (lab.space() != ColorSpace::LAB) throw InvalidSpace("lab_to_rgb expects a LAB raster");
  Raster out(lab.width(), lab.height(), ColorSpace::RGB);
  auto src = lab.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < lab.pixel_count(); ++i) {
    const double fy = (src[3 * i] + 16.0) / 116.0;
    const double fx = fy + src[3 * i + 1] / 500.0;
    const double fz = fy - src[3 * i + 2] / 200.0;
    const double x = kXn * lab_f_inv(fx);
    const double y = kYn * lab_f_inv(fy);
    const double z = kZn * lab_f_inv(fz);
    const double r = 3.2404542 * x - 1.5371385 * y - 0.4985314 * z;
    const double g = -0.9692660 * x + 1.8760108 * y + 0.0415560 * z;
    const double b = 0.0556434 * x - 0.2040259 * y + 1.0572252 * z;
    dst[3 * i] = std::clamp(linear_to_srgb(r), 0.0, 1.0);
    dst[3 * i + 1] = std::clamp(linear_to_srgb(g), 0.0, 1.0);
    dst[3 * i + 2] = std::clamp(linear_to_srgb(b), 0.0, 1.0);
  }
  return out;
}

SaliencyMap normalize(const SaliencyMap& m, Diagnostics* diag) {
  const auto [lo_it, hi_it] = std::minmax_element(m.values().begin(), m.values().end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  std::vector<double> out(m.size());
  // Spreads at round-off level count as constant; stretching them would turn
  // numerical noise into a full-range map.
  const double scale = std::max({1.0, std::abs(lo), std::abs(hi)});
  if (hi - lo <= 1e-12 * scale) {
    warn(diag, "normalize", "constant map");
    std::fill(out.begin(), out.end(), std::clamp(lo, 0.0, 1.0));
  } else {
    const double range = hi - lo;
    for (std::size_t i = 0; i < m.size(); ++i) out[i] = (m[i] - lo) / range;
  }
  return {m.width(), m.height(), std::move(out)};
}

namespace {

// Corner-aligned source coordinate of destination index i.
double source_coord(int i, int src_len, int dst_len) {
  if (dst_len == 1) return 0.5 * (src_len - 1);
  return static_cast<double>(i) * (src_len - 1) / (dst_len - 1);
}

struct Tap {
  int lo;
  int hi;
  double frac;
};

std::vector<Tap> make_taps(int src_len, int dst_len) {
  std::vector<Tap> taps(dst_len);
  for (int i = 0; i < dst_len; ++i) {
    const double s = source_coord(i, src_len, dst_len);
    int lo = static_cast<int>(std::floor(s));
    lo = std::clamp(lo, 0, src_len - 1);
    const int hi = std::min(lo + 1, src_len - 1);
    taps[i] = {lo, hi, s - lo};
  }
  return taps;
}

template <typename Get, typename Put>
void bilinear(int sw, int sh, int dw, int dh, int channels, Get get, Put put) {
  const auto xt = make_taps(sw, dw);
  const auto yt = make_taps(sh, dh);
  for (int y = 0; y < dh; ++y) {
    const auto& ty = yt[y];
    for (int x = 0; x < dw; ++x) {
      const auto& tx = xt[x];
      for (int c = 0; c < channels; ++c) {
        const double top = get(tx.lo, ty.lo, c) * (1.0 - tx.frac) + get(tx.hi, ty.lo, c) * tx.frac;
        const double bot = get(tx.lo, ty.hi, c) * (1.0 - tx.frac) + get(tx.hi, ty.hi, c) * tx.frac;
        put(x, y, c, top * (1.0 - ty.frac) + bot * ty.frac);
      }
    }
  }
}

void check_target(int width, int height) {
  if (width < 1 || height < 1) throw InvalidArgument("resize target dimensions must be >= 1");
}

}  // namespace

SaliencyMap resize_bilinear(const SaliencyMap& m, int width, int height) {
  check_target(width, height);
  if (width == m.width() && height == m.height()) return m;
  SaliencyMap out(width, height);
  bilinear(
      m.width(), m.height(), width, height, 1,
      [&](int x, int y, int) { return m.at(x, y); },
      [&](int x, int y, int, double v) { out.at(x, y) = v; });
  return out;
}

Raster resize_bilinear(const Raster& r, int width, int height) {
  check_target(width, height);
  if (width == r.width() && height == r.height()) return r;
  Raster out(width, height, r.space());
  bilinear(
      r.width(), r.height(), width, height, r.channels(),
      [&](int x, int y, int c) { return r.at(x, y, c); },
      [&](int x, int y, int c, double v) { out.at(x, y, c) = v; });
  return out;
}

Raster resize_area(const Raster& rgb, int w, int h) {
  check_target(w, h);
  if (w > rgb.width() || h > rgb.height()) return resize_bilinear(rgb, w, h);
  if (w == rgb.width() && h == rgb.height()) return rgb;
  Raster out(w, h, rgb.space());
  const double sx = static_cast<double>(rgb.width()) / w;
  const double sy = static_cast<double>(rgb.height()) / h;
  for (int y = 0; y < h; ++y) {
    const int y0 = static_cast<int>(std::floor(y * sy));
    const int y1 = std::max(y0 + 1, std::min(rgb.height(), static_cast<int>(std::floor((y + 1) * sy))));
    for (int x = 0; x < w; ++x) {
      const int x0 = static_cast<int>(std::floor(x * sx));
      const int x1 =
          std::max(x0 + 1, std::min(rgb.width(), static_cast<int>(std::floor((x + 1) * sx))));
      const double count = static_cast<double>(x1 - x0) * (y1 - y0);
      for (int c = 0; c < rgb.channels(); ++c) {
        double acc = 0.0;
        for (int yy = y0; yy < y1; ++yy)
          for (int xx = x0; xx < x1; ++xx) acc += rgb.at(xx, yy, c);
        out.at(x, y, c) = acc / count;
      }
    }
  }
  return out;
}

SaliencyMap paint_regions(int width, int height, std::span<const int> labels,
                          std::span<const double> region_values) {
  SaliencyMap out(width, height);
  for (std::size_t i = 0; i < labels.size(); ++i)
    out[i] = labels[i] >= 0 ? region_values[static_cast<std::size_t>(labels[i])] : 0.0;
  return out;
}

std::vector<double> region_means(const SaliencyMap& m, std::span<const int> labels,
                                 int region_count) {
  // Running means: exact when a region is constant.
  std::vector<double> mean(region_count, 0.0);
  std::vector<std::size_t> count(region_count, 0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0) continue;
    const int r = labels[i];
    ++count[r];
    mean[r] += (m[i] - mean[r]) / static_cast<double>(count[r]);
  }
  return mean;
}

}  // namespace salpan
