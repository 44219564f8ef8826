#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "salpan/raster.hpp"

namespace salpan::metrics {

inline constexpr int kCurvePoints = 256;
inline constexpr double kDefaultBeta2 = 0.3;

struct PrecisionRecall {
  double precision = 0.0;
  double recall = 0.0;
};

/// Binarize with pred >= thresh. An empty prediction has precision 1 and
/// recall 0. Throws InvalidGroundTruth when gt has no positive pixel.
PrecisionRecall precision_recall(const SaliencyMap& pred, const GroundTruthMask& gt, double thresh);

/// Per-threshold curves over the 8-bit quantized map; index k is the
/// threshold k/255 (pixels with round(255 v) >= k are predicted salient).
struct Curve {
  std::array<double, kCurvePoints> precision{};
  std::array<double, kCurvePoints> recall{};
  std::array<double, kCurvePoints> f_measure{};
  std::array<double, kCurvePoints> fpr{};
};

Curve pr_curve(const SaliencyMap& pred, const GroundTruthMask& gt, double beta2 = kDefaultBeta2);

/// Trapezoidal ROC area over the curve's 256 thresholds plus the (0,0)
/// end point. A mask without negatives scores 1.
double auc(const Curve& curve);
double auc(const SaliencyMap& pred, const GroundTruthMask& gt);

double mae(const SaliencyMap& pred, const SaliencyMap& gt);
double mae(const SaliencyMap& pred, const GroundTruthMask& gt);

/// (1 + b2) P R / (b2 P + R); 0 when P = R = 0.
double f_measure(double precision, double recall, double beta2 = kDefaultBeta2);

/// min(2 mean(pred), 1).
double adaptive_threshold(const SaliencyMap& pred);

/// Supplies the object-aware and region-aware structural similarity terms of
/// the S-measure. Implementations must return 1 for both when pred == gt.
class StructureEvaluator {
public:
  virtual ~StructureEvaluator() = default;
  virtual double object_score(const SaliencyMap& pred, const GroundTruthMask& gt) const = 0;
  virtual double region_score(const SaliencyMap& pred, const GroundTruthMask& gt) const = 0;
};

/// alpha * S_o + (1 - alpha) * S_r.
double s_blend(double object_score, double region_score, double alpha);

/// Empty when no evaluator is supplied: the metric is reported as not
/// computed.
std::optional<double> s_measure(const SaliencyMap& pred, const GroundTruthMask& gt, double alpha,
                                const StructureEvaluator* evaluator);

struct MetricParams {
  double beta2 = kDefaultBeta2;
  double s_alpha = 0.5;
};

struct ImageScores {
  std::string name;
  double mae = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f_measure = 0.0;
  double threshold = 0.0;  ///< adaptive threshold used for P/R/F
  double auc = 0.0;
  std::optional<double> s_measure;
  Curve curve;
};

/// All metrics for one aligned (pred, gt) pair.
ImageScores score_image(std::string name, const SaliencyMap& pred, const GroundTruthMask& gt,
                        const MetricParams& params = {},
                        const StructureEvaluator* evaluator = nullptr);

struct Skipped {
  std::string name;
  std::string reason;
};

struct Aggregates {
  double mae = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f_measure = 0.0;
  double auc = 0.0;
  std::optional<double> s_measure;
};

struct EvalReport {
  std::vector<ImageScores> per_image;  ///< sorted by name
  std::vector<Skipped> skipped;
  Aggregates aggregates;
  Curve mean_curve;  ///< per-threshold means over images
  MetricParams params;
  std::vector<std::pair<std::string, std::string>> config;  ///< echoed settings
};

/// Arithmetic means of per-image values (images in the given order).
EvalReport aggregate(std::vector<ImageScores> images, std::vector<Skipped> skipped,
                     const MetricParams& params);

/// Pair files by stem, resize predictions to the ground-truth size when
/// needed, and score every pair. Unmatched, unreadable, or empty-mask files
/// end up in `skipped`. Throws InvalidArgument when nothing can be scored.
EvalReport evaluate_directories(const std::filesystem::path& pred_dir,
                                const std::filesystem::path& gt_dir,
                                const MetricParams& params = {}, std::size_t threads = 1,
                                const StructureEvaluator* evaluator = nullptr);

/// JSON report text (schema 1), deterministic key order and formatting.
std::string report_json(const EvalReport& report);
/// One row per image.
std::string report_csv(const EvalReport& report);
/// Two-column "recall precision" lines, one per threshold.
std::string pr_curve_text(const Curve& curve);
/// Two-column "threshold f_measure" lines.
std::string f_curve_text(const Curve& curve);

}  // namespace salpan::metrics
