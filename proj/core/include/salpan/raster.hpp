#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "salpan/errors.hpp"

namespace salpan {

enum class ColorSpace { RGB, LAB, GRAY };

/// Interleaved H x W x C image of double samples, row-major.
///
/// RGB and GRAY samples live in [0,1]. LAB samples use the usual CIELAB
/// ranges (L in [0,100], a/b roughly [-128,127]).
class Raster {
public:
  Raster() = default;
  Raster(int width, int height, ColorSpace space);
  Raster(int width, int height, ColorSpace space, std::vector<double> data);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int channels() const noexcept { return channels_; }
  ColorSpace space() const noexcept { return space_; }
  std::size_t pixel_count() const noexcept {
    return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
  }

  double at(int x, int y, int c = 0) const noexcept {
    return data_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
  }
  double& at(int x, int y, int c = 0) noexcept {
    return data_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
  }

  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }

  /// One channel as a dense plane (row-major, W*H values).
  std::vector<double> plane(int c) const;

  friend bool operator==(const Raster&, const Raster&) = default;

private:
  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  ColorSpace space_ = ColorSpace::GRAY;
  std::vector<double> data_;
};

int channel_count(ColorSpace space) noexcept;

/// Single-channel real map aligned to a source raster.
class SaliencyMap {
public:
  SaliencyMap() = default;
  SaliencyMap(int width, int height, double fill = 0.0);
  SaliencyMap(int width, int height, std::vector<double> values);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return values_.size(); }

  double at(int x, int y) const noexcept {
    return values_[static_cast<std::size_t>(y) * width_ + x];
  }
  double& at(int x, int y) noexcept {
    return values_[static_cast<std::size_t>(y) * width_ + x];
  }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  double& operator[](std::size_t i) noexcept { return values_[i]; }

  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  double min() const;
  double max() const;
  double mean() const;
  bool is_constant() const;

  friend bool operator==(const SaliencyMap&, const SaliencyMap&) = default;

private:
  int width_ = 0;
  int height_ = 0;
  std::vector<double> values_;
};

/// Binary {0,1} mask.
class GroundTruthMask {
public:
  GroundTruthMask() = default;
  GroundTruthMask(int width, int height, std::vector<std::uint8_t> values);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::uint8_t operator[](std::size_t i) const noexcept { return values_[i]; }
  std::span<const std::uint8_t> values() const noexcept { return values_; }
  std::size_t positives() const noexcept;

  /// Mask with values 0.0 / 1.0.
  SaliencyMap to_map() const;

  friend bool operator==(const GroundTruthMask&, const GroundTruthMask&) = default;

private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> values_;
};

/// Binarize a map with `value >= threshold`.
GroundTruthMask threshold_mask(const SaliencyMap& m, double threshold);

// Rec.601 luma.
Raster to_gray(const Raster& rgb);

/// sRGB -> XYZ (D65) -> CIELAB.
Raster rgb_to_lab(const Raster& rgb);
Raster lab_to_rgb(const Raster& lab);

/// Affine rescale to [0,1]. A constant map comes back with every value equal
/// to the constant clamped to [0,1]. Reports the constant case to `diag`.
SaliencyMap normalize(const SaliencyMap& m, Diagnostics* diag = nullptr);

/// Corner-aligned bilinear resampling. Returns an exact copy when the size is
/// unchanged.
SaliencyMap resize_bilinear(const SaliencyMap& m, int width, int height);
Raster resize_bilinear(const Raster& r, int width, int height);

/// Box-filter downscale: each output pixel averages the source pixels of its
/// cell. Falls back to bilinear when either dimension grows.
Raster resize_area(const Raster& r, int width, int height);

/// Paint per-region values onto pixels through a label image.
SaliencyMap paint_regions(int width, int height, std::span<const int> labels,
                          std::span<const double> region_values);

/// Per-region means of a map under a label image with `region_count` labels.
std::vector<double> region_means(const SaliencyMap& m, std::span<const int> labels,
                                 int region_count);

}  // namespace salpan
