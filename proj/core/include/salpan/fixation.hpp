#pragma once

#include <span>
#include <vector>

#include "salpan/raster.hpp"

namespace salpan {

/// Real 2-D plane, row-major.
struct Plane {
  int width = 0;
  int height = 0;
  std::vector<double> values;

  double at(int x, int y) const noexcept {
    return values[static_cast<std::size_t>(y) * width + x];
  }
};

/// Orthonormal DCT-II coefficients of a Plane.
struct SpectralPlane {
  int width = 0;
  int height = 0;
  std::vector<double> coefficients;

  double at(int u, int v) const noexcept {
    return coefficients[static_cast<std::size_t>(v) * width + u];
  }
};

/// Separable orthonormal type-II DCT (rows, then columns).
SpectralPlane dct2(const Plane& plane);
/// Exact inverse of dct2 (orthonormal type-III).
Plane idct2(const SpectralPlane& spectrum);

/// sign with sign(0) = 0.
double signum(double v) noexcept;

struct SignatureParams {
  int resize = 64;            ///< max dimension of the working image
  double sigma_frac = 0.045;  ///< Gaussian sigma as a fraction of working width
};

/// Per-channel reconstruction idct2(sign(dct2(x))), squared and summed over
/// channels, before smoothing. Exposed for tests and stage inspection.
Plane signature_energy(const Raster& working_rgb);

/// Gaussian blur with half-sample symmetric (reflect) padding; total mass is
/// preserved.
Plane gaussian_blur(const Plane& plane, double sigma);

/// Image-signature fixation map at the input resolution, normalized.
SaliencyMap signature_saliency(const Raster& rgb, const SignatureParams& params = {},
                               Diagnostics* diag = nullptr);

/// Replace each pixel of a labelled region by the region's mean of `fix`.
/// Pixels with label < 0 get 0, or keep their raw value when
/// `keep_background` is set.
SaliencyMap region_pool(const SaliencyMap& fix, std::span<const int> labels,
                        bool keep_background = false, Diagnostics* diag = nullptr);

}  // namespace salpan
