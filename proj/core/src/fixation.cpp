#include "salpan/fixation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_map>

namespace salpan {

namespace {

// Orthonormal DCT-II basis, row k = frequency.
std::vector<double> dct_basis(int n) {
  std::vector<double> c(static_cast<std::size_t>(n) * n);
  const double s0 = std::sqrt(1.0 / n);
  const double sk = std::sqrt(2.0 / n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      c[static_cast<std::size_t>(k) * n + i] =
          (k == 0 ? s0 : sk) * std::cos(std::numbers::pi * (2.0 * i + 1.0) * k / (2.0 * n));
  return c;
}

// out = B * in along rows (inverse: B^T) for each of `count` lines of length n
// with stride `stride` between samples and `line_step` between lines.
void transform_lines(const std::vector<double>& basis, int n, bool inverse, const double* in,
                     double* out, int count, std::size_t stride, std::size_t line_step) {
  std::vector<double> buf(n);
  for (int line = 0; line < count; ++line) {
    const double* src = in + line * line_step;
    for (int k = 0; k < n; ++k) {
      double acc = 0.0;
      for (int i = 0; i < n; ++i) {
        const double b = inverse ? basis[static_cast<std::size_t>(i) * n + k]
                                 : basis[static_cast<std::size_t>(k) * n + i];
        acc += b * src[i * stride];
      }
      buf[k] = acc;
    }
    double* dst = out + line * line_step;
    for (int k = 0; k < n; ++k) dst[k * stride] = buf[k];
  }
}

std::vector<double> separable(const std::vector<double>& in, int w, int h, bool inverse) {
  if (w < 1 || h < 1 || in.size() != static_cast<std::size_t>(w) * h)
    throw InvalidArgument("dct: plane must be nonempty and match its dimensions");
  const auto bw = dct_basis(w);
  const auto bh = dct_basis(h);
  std::vector<double> tmp(in.size());
  std::vector<double> out(in.size());
  transform_lines(bw, w, inverse, in.data(), tmp.data(), h, 1, static_cast<std::size_t>(w));
  transform_lines(bh, h, inverse, tmp.data(), out.data(), w, static_cast<std::size_t>(w), 1);
  return out;
}

int reflect(int i, int n) {
  const int period = 2 * n;
  int m = i % period;
  if (m < 0) m += period;
  return m < n ? m : period - 1 - m;
}

}  // namespace

SpectralPlane dct2(const Plane& plane) {
  return {plane.width, plane.height, separable(plane.values, plane.width, plane.height, false)};
}

Plane idct2(const SpectralPlane& spectrum) {
  return {spectrum.width, spectrum.height,
          separable(spectrum.coefficients, spectrum.width, spectrum.height, true)};
}

double signum(double v) noexcept { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

Plane signature_energy(const Raster& rgb) {
  const int w = rgb.width();
  const int h = rgb.height();
  Plane energy{w, h, std::vector<double>(rgb.pixel_count(), 0.0)};
  for (int c = 0; c < rgb.channels(); ++c) {
    Plane x{w, h, rgb.plane(c)};
    SpectralPlane spec = dct2(x);
    // Coefficients at round-off level relative to the plane's energy are
    // zero: a constant plane has an exactly DC-only signature.
    double peak = 0.0;
    for (double v : x.values) peak = std::max(peak, std::abs(v));
    const double noise = 1e-12 * peak * std::sqrt(static_cast<double>(w) * h);
    for (double& v : spec.coefficients) v = std::abs(v) <= noise ? 0.0 : signum(v);
    const Plane recon = idct2(spec);
    for (std::size_t i = 0; i < recon.values.size(); ++i)
      energy.values[i] += recon.values[i] * recon.values[i];
  }
  return energy;
}

Plane gaussian_blur(const Plane& plane, double sigma) {
  if (!(sigma > 0.0)) throw InvalidArgument("gaussian_blur: sigma must be positive");
  const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
  std::vector<double> kernel(2 * radius + 1);
  double total = 0.0;
  for (int k = -radius; k <= radius; ++k) {
    kernel[k + radius] = std::exp(-0.5 * k * k / (sigma * sigma));
    total += kernel[k + radius];
  }
  for (double& v : kernel) v /= total;

  const int w = plane.width;
  const int h = plane.height;
  std::vector<double> tmp(plane.values.size());
  std::vector<double> out(plane.values.size());
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k)
        acc += kernel[k + radius] * plane.values[static_cast<std::size_t>(y) * w + reflect(x + k, w)];
      tmp[static_cast<std::size_t>(y) * w + x] = acc;
    }
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k)
        acc += kernel[k + radius] * tmp[static_cast<std::size_t>(reflect(y + k, h)) * w + x];
      out[static_cast<std::size_t>(y) * w + x] = acc;
    }
  return {w, h, std::move(out)};
}

SaliencyMap signature_saliency(const Raster& rgb, const SignatureParams& params, Diagnostics* diag) {
  if (rgb.space() != ColorSpace::RGB) throw InvalidSpace("signature_saliency expects RGB");
  if (params.resize < 1) throw InvalidArgument("signature_saliency: resize must be >= 1");
  if (!(params.sigma_frac > 0.0))
    throw InvalidArgument("signature_saliency: sigma_frac must be positive");
  const double scale = static_cast<double>(params.resize) / std::max(rgb.width(), rgb.height());
  const int ww = std::max(1, static_cast<int>(std::lround(rgb.width() * scale)));
  const int wh = std::max(1, static_cast<int>(std::lround(rgb.height() * scale)));
  const Raster working = resize_area(rgb, ww, wh);
  const Plane smooth = gaussian_blur(signature_energy(working), params.sigma_frac * ww);
  const SaliencyMap small(ww, wh, smooth.values);
  return normalize(resize_bilinear(small, rgb.width(), rgb.height()), diag);
}

SaliencyMap region_pool(const SaliencyMap& fix, std::span<const int> labels, bool keep_background,
                        Diagnostics* diag) {
  if (labels.size() != fix.size()) throw InvalidArgument("region_pool: label size mismatch");
  // Running means are exact on constant regions, so pooling is idempotent.
  std::unordered_map<int, std::pair<double, std::size_t>> acc;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0) continue;
    auto& [mean, count] = acc[labels[i]];
    ++count;
    mean += (fix[i] - mean) / static_cast<double>(count);
  }
  if (acc.empty()) warn(diag, "region_pool", "no proposal regions; pooled map is empty");
  SaliencyMap out(fix.width(), fix.height());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0) {
      out[i] = keep_background ? fix[i] : 0.0;
    } else {
      out[i] = acc.at(labels[i]).first;
    }
  }
  return out;
}

}  // namespace salpan
