#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "salpan/config.hpp"
#include "salpan/raster.hpp"

namespace salpan {

inline constexpr std::size_t kStageCount = 11;

/// Fixed dump filenames, in pipeline order.
inline constexpr std::array<std::string_view, kStageCount> kStageFiles = {
    "01_density.png",  "02_proposal_mask.png", "03_fg.png",   "04_bg.png",
    "05_pathway1.png", "06_fixation.png",      "07_pooled.png", "08_mn1.png",
    "09_mn2.png",      "10_combined.png",      "11_final.png"};

/// Binary copy of the proposal mask written next to the PNG stages.
inline constexpr std::string_view kProposalMaskPgm = "02_proposal_mask.pgm";

/// Intermediate maps, all at input resolution.
struct StageBundle {
  std::optional<SaliencyMap> density_map;
  std::optional<SaliencyMap> proposal_mask;
  std::optional<SaliencyMap> fg_map;
  std::optional<SaliencyMap> bg_map;
  std::optional<SaliencyMap> pathway1;
  std::optional<SaliencyMap> fixation_map;
  std::optional<SaliencyMap> pooled_map;
  std::optional<SaliencyMap> mn1;
  std::optional<SaliencyMap> mn2;
  std::optional<SaliencyMap> combined;
  std::optional<SaliencyMap> final_map;

  /// Stages in kStageFiles order.
  std::array<const std::optional<SaliencyMap>*, kStageCount> ordered() const;
};

struct DetectResult {
  SaliencyMap saliency;
  StageBundle stages;  ///< populated only when stages were requested
  Diagnostics diagnostics;
};

/// Full pipeline on an RGB raster. Module failures surface as StageError.
/// `threads` bounds the parallelism used inside this one image.
DetectResult detect(const Raster& rgb, const PipelineConfig& cfg, bool keep_stages = false,
                    std::size_t threads = 1);

/// Reads the image first; unreadable input raises IoError with the path.
DetectResult detect_file(const std::filesystem::path& image, const PipelineConfig& cfg,
                         bool keep_stages = false, std::size_t threads = 1);

/// Writes every populated stage under its fixed name (atomic per file).
void write_stages(const StageBundle& stages, const std::filesystem::path& outdir);

struct BatchResult {
  std::filesystem::path input;
  std::filesystem::path output;  ///< <outdir>/<stem>.png
  bool ok = false;
  std::string error;
  std::vector<Warning> warnings;
};

/// Runs detect over each input with a pool of `threads` workers and writes
/// <outdir>/<stem>.png (plus <outdir>/<stem>/ stage dumps when io.dump_stages
/// is set). Results are in input order and independent of `threads`.
std::vector<BatchResult> run_batch(const std::vector<std::filesystem::path>& inputs,
                                   const std::filesystem::path& outdir, const PipelineConfig& cfg,
                                   std::size_t threads);

}  // namespace salpan
