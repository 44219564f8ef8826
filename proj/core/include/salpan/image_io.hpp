#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>

#include "salpan/raster.hpp"

namespace salpan::io {

/// Load PNG, JPEG, or binary PGM/PPM (P5/P6). 8-bit samples become v/255 and
/// 16-bit samples v/65535. Gray files load as GRAY; everything else as RGB
/// (alpha is dropped).
Raster read_image(const std::filesystem::path& path);

/// Load as RGB, replicating gray files across three channels.
Raster read_rgb(const std::filesystem::path& path);

/// Ground-truth masks binarize with 8-bit value >= 128.
GroundTruthMask read_mask(const std::filesystem::path& path);

/// Single-channel map as a real map in [0,1] (first channel, or luma for RGB).
SaliencyMap read_map(const std::filesystem::path& path);

/// 8-bit PNG, value quantized as round(clamp(v,0,1) * 255). Written to a
/// temporary sibling and renamed into place.
void write_png(const std::filesystem::path& path, const SaliencyMap& map);
void write_png(const std::filesystem::path& path, const Raster& rgb_or_gray);

/// Binary PGM (P5), 8-bit quantized like write_png.
void write_pgm(const std::filesystem::path& path, const SaliencyMap& map);
void write_pgm(const std::filesystem::path& path, const GroundTruthMask& mask);

/// 16-bit binary PGM of a label image (debug dump).
void write_label_pgm(const std::filesystem::path& path, int width, int height,
                     std::span<const int> labels);

/// Write text through a temporary file + rename.
void write_text_atomic(const std::filesystem::path& path, const std::string& contents);

std::uint8_t quantize(double v) noexcept;

}  // namespace salpan::io
