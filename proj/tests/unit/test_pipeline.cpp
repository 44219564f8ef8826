#include <gtest/gtest.h>

#include <fstream>
#include <iterator>

#include "fixtures.hpp"
#include "salpan/fusion.hpp"
#include "salpan/image_io.hpp"
#include "salpan/pipeline.hpp"
#include "salpan/ranking.hpp"

namespace salpan {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

double inside_outside_gap(const SaliencyMap& s, const GroundTruthMask& gt) {
  double in = 0.0;
  double out = 0.0;
  std::size_t nin = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (gt[i]) {
      in += s[i];
      ++nin;
    } else {
      out += s[i];
    }
  }
  return in / nin - out / (s.size() - nin);
}

TEST(Detect, TexturedSceneObjectStandsOut) {
  const auto fx = testing::make_fixture(0, 256, 128);
  const DetectResult r = detect(fx.rgb, PipelineConfig{});
  EXPECT_EQ(r.saliency.width(), 256);
  EXPECT_EQ(r.saliency.height(), 128);
  EXPECT_GE(r.saliency.min(), 0.0);
  EXPECT_LE(r.saliency.max(), 1.0);
  EXPECT_GE(inside_outside_gap(r.saliency, fx.gt), 0.3);
}

TEST(Detect, ConstantImageGivesConstantMapsAndWarns) {
  const Raster gray(64, 32, ColorSpace::RGB, std::vector<double>(64 * 32 * 3, 0.5));
  const DetectResult r = detect(gray, PipelineConfig{}, true);
  EXPECT_TRUE(r.saliency.is_constant());
  EXPECT_TRUE(r.diagnostics.has("pipeline"));
  for (const auto* stage : r.stages.ordered()) {
    ASSERT_TRUE(stage->has_value());
    EXPECT_TRUE((*stage)->is_constant());
  }
  EXPECT_EQ((*r.stages.proposal_mask)[0], 1.0);
}

TEST(Detect, DeterministicAcrossRunsAndThreads) {
  const auto fx = testing::make_fixture(1, 192, 96);
  const DetectResult a = detect(fx.rgb, PipelineConfig{}, true, 1);
  const DetectResult b = detect(fx.rgb, PipelineConfig{}, true, 3);
  EXPECT_EQ(a.saliency, b.saliency);
  const auto sa = a.stages.ordered();
  const auto sb = b.stages.ordered();
  for (std::size_t k = 0; k < kStageCount; ++k) EXPECT_EQ(**sa[k], **sb[k]) << kStageFiles[k];
}

TEST(Detect, StagesRecomposeIntoLaterStages) {
  const auto fx = testing::make_fixture(0, 192, 96);
  const PipelineConfig cfg;
  const DetectResult r = detect(fx.rgb, cfg, true);
  const auto& s = r.stages;
  EXPECT_EQ(*s.pathway1, combine_pathway1(*s.fg_map, *s.bg_map));
  SaliencyMap sum(192, 96);
  for (std::size_t i = 0; i < sum.size(); ++i) sum[i] = (*s.mn1)[i] + (*s.mn2)[i];
  EXPECT_EQ(*s.combined, normalize(sum));
  const MaximaParams mp{cfg.fusion.mn_thresh, cfg.fusion.mn_neighborhood, cfg.fusion.mn_exclude_global};
  EXPECT_EQ(*s.mn1, maxima_normalize(*s.pathway1, mp));
  EXPECT_EQ(*s.mn2, maxima_normalize(*s.pooled_map, mp));
  const Segmentation seg = slic(rgb_to_lab(fx.rgb), cfg.slic);
  EXPECT_EQ(*s.final_map, geodesic_refine(*s.combined, seg));
  EXPECT_EQ(*s.final_map, r.saliency);
  for (double v : s.proposal_mask->values()) EXPECT_TRUE(v == 0.0 || v == 1.0);
  // Pooled fixation is zero outside the proposal mask by default.
  for (std::size_t i = 0; i < sum.size(); ++i)
    if ((*s.proposal_mask)[i] == 0.0) EXPECT_EQ((*s.pooled_map)[i], 0.0);
}

TEST(Detect, MaxDimDownscalesInternallyOnly) {
  const auto fx = testing::make_fixture(1, 256, 128);
  PipelineConfig cfg;
  cfg.io.max_dim = 96;
  const DetectResult r = detect(fx.rgb, cfg, true);
  EXPECT_EQ(r.saliency.width(), 256);
  EXPECT_EQ(r.saliency.height(), 128);
  EXPECT_EQ(r.stages.density_map->width(), 256);
  EXPECT_GE(inside_outside_gap(r.saliency, fx.gt), 0.3);
}

TEST(Detect, ErrorsNameTheirStage) {
  PipelineConfig bad;
  bad.ranking.alpha = 1.5;
  try {
    detect(testing::make_disk_on_flat(32, 32).rgb, bad);
    FAIL() << "expected StageError";
  } catch (const StageError& e) {
    EXPECT_EQ(e.stage(), "config");
  }
  PipelineConfig tiny;
  tiny.density.regions = 5000;
  try {
    detect(testing::make_disk_on_flat(32, 32).rgb, tiny);
    FAIL() << "expected StageError";
  } catch (const StageError& e) {
    EXPECT_EQ(e.stage(), "density");
  }
  EXPECT_THROW(detect(Raster(4, 4, ColorSpace::GRAY), PipelineConfig{}), InvalidSpace);
}

TEST(DetectFile, MissingFileRaisesIoErrorWithPath) {
  try {
    detect_file("/nonexistent/in.png", PipelineConfig{});
    FAIL() << "expected IoError";
  } catch (const IoError& e) {
    EXPECT_EQ(e.path(), "/nonexistent/in.png");
  }
}

TEST(WriteStages, FixedManifest) {
  testing::TempDir dir("stages");
  const DetectResult r = detect(testing::make_fixture(2, 128, 64).rgb, PipelineConfig{}, true);
  write_stages(r.stages, dir.path());
  for (auto name : kStageFiles) {
    const fs::path p = dir / std::string(name);
    ASSERT_TRUE(fs::exists(p)) << p;
    const SaliencyMap m = io::read_map(p);
    EXPECT_EQ(m.width(), 128);
    EXPECT_EQ(m.height(), 64);
  }
  const GroundTruthMask mask = io::read_mask(dir / std::string(kProposalMaskPgm));
  EXPECT_EQ(mask.to_map(), *r.stages.proposal_mask);
  std::size_t files = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir.path())) ++files;
  EXPECT_EQ(files, kStageCount + 1);
}

TEST(RunBatch, ThreadCountDoesNotChangeOutput) {
  testing::TempDir in("batch-in");
  testing::TempDir out1("batch-1");
  testing::TempDir out3("batch-3");
  std::vector<fs::path> inputs;
  for (int i = 0; i < 3; ++i) {
    const fs::path p = in / ("img" + std::to_string(i) + ".png");
    io::write_png(p, testing::make_fixture(i, 128, 64).rgb);
    inputs.push_back(p);
  }
  PipelineConfig cfg;
  cfg.io.dump_stages = true;
  const auto r1 = run_batch(inputs, out1.path(), cfg, 1);
  const auto r3 = run_batch(inputs, out3.path(), cfg, 3);
  ASSERT_EQ(r1.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    ASSERT_TRUE(r1[i].ok) << r1[i].error;
    ASSERT_TRUE(r3[i].ok) << r3[i].error;
    EXPECT_EQ(r1[i].output.filename(), inputs[i].stem().string() + ".png");
    EXPECT_EQ(slurp(r1[i].output), slurp(r3[i].output));
    const std::string stem = inputs[i].stem().string();
    for (auto name : kStageFiles)
      EXPECT_EQ(slurp(out1 / stem / std::string(name)), slurp(out3 / stem / std::string(name)));
  }
}

TEST(RunBatch, FailuresAreReportedPerInput) {
  testing::TempDir in("batch-in");
  testing::TempDir out("batch-out");
  const fs::path good = in / "good.png";
  io::write_png(good, testing::make_disk_on_flat(64, 32).rgb);
  const fs::path bad = in / "bad.png";
  std::ofstream(bad) << "garbage";
  const auto r = run_batch({good, bad}, out.path(), PipelineConfig{}, 2);
  EXPECT_TRUE(r[0].ok);
  EXPECT_FALSE(r[1].ok);
  EXPECT_NE(r[1].error.find("bad.png"), std::string::npos);
  EXPECT_TRUE(fs::exists(out / "good.png"));
  EXPECT_FALSE(fs::exists(out / "bad.png"));
  EXPECT_THROW(run_batch({good, in / "sub" / "good.jpg"}, out.path(), PipelineConfig{}, 1),
               InvalidArgument);
}

}  // namespace
}  // namespace salpan
