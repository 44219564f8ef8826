#include "salpan/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <set>

#include "salpan/density.hpp"
#include "salpan/fixation.hpp"
#include "salpan/fusion.hpp"
#include "salpan/image_io.hpp"
#include "salpan/parallel.hpp"
#include "salpan/ranking.hpp"
#include "salpan/superpixel.hpp"

namespace salpan {

namespace fs = std::filesystem;

namespace {

template <typename Fn>
auto stage(const char* name, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const IoError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

bool constant_raster(const Raster& r) {
  const auto d = r.data();
  const int c = r.channels();
  for (std::size_t i = c; i < d.size(); ++i)
    if (d[i] != d[i % c]) return false;
  return true;
}

SaliencyMap to_size(const SaliencyMap& m, int width, int height) {
  return resize_bilinear(m, width, height);
}

SaliencyMap mask_to_size(const GroundTruthMask& m, int width, int height) {
  if (m.width() == width && m.height() == height) return m.to_map();
  return threshold_mask(resize_bilinear(m.to_map(), width, height), 0.5).to_map();
}

struct Pathway1 {
  SaliencyMap fg;
  SaliencyMap bg;
  SaliencyMap combined;
};

Pathway1 run_ranking(const RegionGraph& graph, const Segmentation& seg, const SaliencyMap& seed_map,
                     const GroundTruthMask& mask, const PipelineConfig& cfg, Diagnostics* diag) {
  SeedSet fg_seeds;
  try {
    fg_seeds = foreground_seeds(region_means(seed_map, seg.labels, seg.region_count));
  } catch (const NoSeedsError& e) {
    warn(diag, "ranking", std::string(e.what()) + "; seeding from the proposal mask");
    fg_seeds = foreground_seeds(region_means(mask.to_map(), seg.labels, seg.region_count));
  }
  const SeedSet bg_seeds = background_seeds(seg, diag);
  Pathway1 p{grow_foreground(graph, seg, fg_seeds, cfg.ranking.alpha, diag),
             grow_background(graph, seg, bg_seeds, cfg.ranking.alpha, diag), SaliencyMap(1, 1)};
  p.combined = combine_pathway1(p.fg, p.bg, diag);
  return p;
}

DetectResult constant_result(int width, int height, bool keep_stages, Diagnostics diag) {
  warn(&diag, "pipeline", "constant input image; every stage map is constant");
  DetectResult r{SaliencyMap(width, height, 0.0), {}, std::move(diag)};
  if (keep_stages) {
    const SaliencyMap zero(width, height, 0.0);
    auto& s = r.stages;
    s.density_map = s.fg_map = s.bg_map = s.pathway1 = s.fixation_map = s.pooled_map = s.mn1 =
        s.mn2 = s.combined = s.final_map = zero;
    s.proposal_mask = SaliencyMap(width, height, 1.0);
  }
  return r;
}

}  // namespace

std::array<const std::optional<SaliencyMap>*, kStageCount> StageBundle::ordered() const {
  return {&density_map, &proposal_mask, &fg_map, &bg_map, &pathway1,  &fixation_map,
          &pooled_map,  &mn1,           &mn2,    &combined, &final_map};
}

DetectResult detect(const Raster& input, const PipelineConfig& cfg, bool keep_stages,
                    std::size_t threads) {
  if (input.space() != ColorSpace::RGB) throw InvalidSpace("detect expects an RGB raster");
  stage("config", [&] {
    validate(cfg);
    return 0;
  });
  threads = std::max<std::size_t>(1, threads);
  const int width = input.width();
  const int height = input.height();
  Diagnostics diag;

  if (constant_raster(input)) return constant_result(width, height, keep_stages, std::move(diag));

  const Raster rgb = stage("raster", [&] {
    const int longest = std::max(width, height);
    if (cfg.io.max_dim == 0 || longest <= cfg.io.max_dim) return input;
    const double s = static_cast<double>(cfg.io.max_dim) / longest;
    return resize_area(input, std::max(1, static_cast<int>(std::lround(width * s))),
                       std::max(1, static_cast<int>(std::lround(height * s))));
  });
  const Raster lab = stage("raster", [&] { return rgb_to_lab(rgb); });
  const Raster gray = stage("raster", [&] { return to_gray(rgb); });

  // The fixation signature does not depend on pathway 1; run it alongside.
  Diagnostics fix_diag;
  auto fixation = std::async(threads > 1 ? std::launch::async : std::launch::deferred, [&] {
    return stage("fixation", [&] {
      return signature_saliency(rgb, {cfg.fixation.resize, cfg.fixation.sigma_frac}, &fix_diag);
    });
  });

  const Segmentation seg = stage("superpixel", [&] { return slic(lab, cfg.slic); });
  const RegionGraph graph = stage("superpixel", [&] { return build_graph(seg, cfg.ranking.sigma2); });

  const DensityMap dmap = stage("density", [&] {
    return density_map(gray, cfg.density.radii, threads > 1 ? threads - 1 : 1);
  });
  const RegionPartition partition = stage("density", [&] {
    return segment_regions(lab, dmap, {cfg.density.regions, cfg.density.weight}, seg.labels);
  });
  const RegionContrast contrast =
      stage("density", [&] { return region_contrast(partition, dmap, cfg.density.bins, &diag); });
  const GroundTruthMask mask = stage("density", [&] { return binarize_proposals(contrast.map, &diag); });

  std::vector<int> proposal_labels(partition.labels.size());
  for (std::size_t i = 0; i < proposal_labels.size(); ++i)
    proposal_labels[i] = mask[i] ? partition.labels[i] : -1;

  const SaliencyMap fix_map = fixation.get();
  diag.append(fix_diag);
  const SaliencyMap pooled = stage("fixation", [&] {
    return region_pool(fix_map, proposal_labels, cfg.fixation.pool_keep_background, &diag);
  });

  const Pathway1 p1 = stage("ranking", [&] {
    SaliencyMap seed_map = pooled;
    if (!cfg.ranking.seeds_from_fixation) {
      for (std::size_t i = 0; i < seed_map.size(); ++i) seed_map[i] = contrast.map[i] * mask[i];
    }
    return run_ranking(graph, seg, seed_map, mask, cfg, &diag);
  });

  const MaximaParams mp{cfg.fusion.mn_thresh, cfg.fusion.mn_neighborhood,
                        cfg.fusion.mn_exclude_global};
  const SaliencyMap mn1 = stage("fusion", [&] { return maxima_normalize(p1.combined, mp, &diag); });
  const SaliencyMap mn2 = stage("fusion", [&] { return maxima_normalize(pooled, mp, &diag); });
  const SaliencyMap combined = stage("fusion", [&] {
    SaliencyMap sum(mn1.width(), mn1.height());
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] = mn1[i] + mn2[i];
    return normalize(sum, &diag);
  });
  const SaliencyMap refined = stage("fusion", [&] { return geodesic_refine(combined, seg, &diag); });

  DetectResult result{to_size(refined, width, height), {}, std::move(diag)};
  if (keep_stages) {
    auto& s = result.stages;
    s.density_map = to_size(dmap.to_map(), width, height);
    s.proposal_mask = mask_to_size(mask, width, height);
    s.fg_map = to_size(p1.fg, width, height);
    s.bg_map = to_size(p1.bg, width, height);
    s.pathway1 = to_size(p1.combined, width, height);
    s.fixation_map = to_size(fix_map, width, height);
    s.pooled_map = to_size(pooled, width, height);
    s.mn1 = to_size(mn1, width, height);
    s.mn2 = to_size(mn2, width, height);
    s.combined = to_size(combined, width, height);
    s.final_map = result.saliency;
  }
  return result;
}

DetectResult detect_file(const fs::path& image, const PipelineConfig& cfg, bool keep_stages,
                         std::size_t threads) {
  return detect(io::read_rgb(image), cfg, keep_stages, threads);
}

void write_stages(const StageBundle& stages, const fs::path& outdir) {
  fs::create_directories(outdir);
  const auto maps = stages.ordered();
  for (std::size_t k = 0; k < kStageCount; ++k)
    if (*maps[k]) io::write_png(outdir / kStageFiles[k], **maps[k]);
  if (stages.proposal_mask)
    io::write_pgm(outdir / kProposalMaskPgm, threshold_mask(*stages.proposal_mask, 0.5));
}

std::vector<BatchResult> run_batch(const std::vector<fs::path>& inputs, const fs::path& outdir,
                                   const PipelineConfig& cfg, std::size_t threads) {
  validate(cfg);
  std::set<std::string> stems;
  for (const auto& in : inputs)
    if (!stems.insert(in.stem().string()).second)
      throw InvalidArgument("batch: two inputs share the output name " + in.stem().string());
  fs::create_directories(outdir);

  threads = std::max<std::size_t>(1, threads);
  const std::size_t workers = std::min(threads, std::max<std::size_t>(1, inputs.size()));
  const std::size_t inner = std::max<std::size_t>(1, threads / workers);
  std::vector<BatchResult> results(inputs.size());
  parallel_for(0, inputs.size(), workers, [&](std::size_t i) {
    BatchResult& r = results[i];
    r.input = inputs[i];
    r.output = outdir / (inputs[i].stem().string() + ".png");
    try {
      DetectResult d = detect_file(inputs[i], cfg, cfg.io.dump_stages, inner);
      io::write_png(r.output, d.saliency);
      if (cfg.io.dump_stages) write_stages(d.stages, outdir / inputs[i].stem());
      r.warnings = d.diagnostics.warnings();
      r.ok = true;
    } catch (const std::exception& e) {
      r.error = e.what();
    }
  });
  return results;
}

}  // namespace salpan
