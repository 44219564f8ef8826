#include "salpan/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "salpan/image_io.hpp"

namespace salpan::metrics {

namespace {

void check_aligned(int pw, int ph, int gw, int gh, const char* op) {
  if (pw != gw || ph != gh)
    throw InvalidArgument(std::string(op) + ": prediction and ground truth sizes differ");
}

void check_gt(const GroundTruthMask& gt) {
  if (gt.positives() == 0) throw InvalidGroundTruth("ground truth has no positive pixel");
}

}  // namespace

PrecisionRecall precision_recall(const SaliencyMap& pred, const GroundTruthMask& gt, double thresh) {
  check_aligned(pred.width(), pred.height(), gt.width(), gt.height(), "precision_recall");
  check_gt(gt);
  std::size_t predicted = 0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (!(pred[i] >= thresh)) continue;
    ++predicted;
    hits += gt[i];
  }
  PrecisionRecall pr;
  pr.precision = predicted == 0 ? 1.0 : static_cast<double>(hits) / predicted;
  pr.recall = static_cast<double>(hits) / gt.positives();
  return pr;
}

Curve pr_curve(const SaliencyMap& pred, const GroundTruthMask& gt, double beta2) {
  check_aligned(pred.width(), pred.height(), gt.width(), gt.height(), "pr_curve");
  check_gt(gt);
  std::array<std::size_t, kCurvePoints> pos{};
  std::array<std::size_t, kCurvePoints> neg{};
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const int q = io::quantize(pred[i]);
    (gt[i] ? pos : neg)[q] += 1;
  }
  const std::size_t positives = gt.positives();
  const std::size_t negatives = gt.size() - positives;
  Curve c;
  std::size_t tp = 0;
  std::size_t fp = 0;
  for (int k = kCurvePoints - 1; k >= 0; --k) {
    tp += pos[k];
    fp += neg[k];
    c.precision[k] = tp + fp == 0 ? 1.0 : static_cast<double>(tp) / (tp + fp);
    c.recall[k] = static_cast<double>(tp) / positives;
    c.fpr[k] = negatives == 0 ? 0.0 : static_cast<double>(fp) / negatives;
    c.f_measure[k] = f_measure(c.precision[k], c.recall[k], beta2);
  }
  return c;
}

double auc(const Curve& curve) {
  // Walk thresholds from high to low: FPR and TPR are non-decreasing.
  if (curve.fpr[0] == 0.0) return 1.0;  // no negatives
  double area = 0.0;
  double x = 0.0;
  double y = 0.0;
  for (int k = kCurvePoints - 1; k >= 0; --k) {
    area += (curve.fpr[k] - x) * (curve.recall[k] + y) * 0.5;
    x = curve.fpr[k];
    y = curve.recall[k];
  }
  return area;
}

double auc(const SaliencyMap& pred, const GroundTruthMask& gt) { return auc(pr_curve(pred, gt)); }

double mae(const SaliencyMap& pred, const SaliencyMap& gt) {
  check_aligned(pred.width(), pred.height(), gt.width(), gt.height(), "mae");
  double acc = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) acc += std::abs(gt[i] - pred[i]);
  return acc / static_cast<double>(pred.size());
}

double mae(const SaliencyMap& pred, const GroundTruthMask& gt) {
  check_aligned(pred.width(), pred.height(), gt.width(), gt.height(), "mae");
  double acc = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) acc += std::abs(gt[i] - pred[i]);
  return acc / static_cast<double>(pred.size());
}

double f_measure(double precision, double recall, double beta2) {
  if (precision == 0.0 && recall == 0.0) return 0.0;
  return (1.0 + beta2) * precision * recall / (beta2 * precision + recall);
}

double adaptive_threshold(const SaliencyMap& pred) { return std::min(2.0 * pred.mean(), 1.0); }

double s_blend(double object_score, double region_score, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw InvalidArgument("s_measure: alpha must lie in [0,1]");
  return alpha * object_score + (1.0 - alpha) * region_score;
}

std::optional<double> s_measure(const SaliencyMap& pred, const GroundTruthMask& gt, double alpha,
                                const StructureEvaluator* evaluator) {
  check_aligned(pred.width(), pred.height(), gt.width(), gt.height(), "s_measure");
  if (!evaluator) return std::nullopt;
  return s_blend(evaluator->object_score(pred, gt), evaluator->region_score(pred, gt), alpha);
}

ImageScores score_image(std::string name, const SaliencyMap& pred, const GroundTruthMask& gt,
                        const MetricParams& params, const StructureEvaluator* evaluator) {
  ImageScores s;
  s.name = std::move(name);
  s.curve = pr_curve(pred, gt, params.beta2);
  s.threshold = adaptive_threshold(pred);
  const auto pr = precision_recall(pred, gt, s.threshold);
  s.precision = pr.precision;
  s.recall = pr.recall;
  s.f_measure = f_measure(pr.precision, pr.recall, params.beta2);
  s.mae = mae(pred, gt);
  s.auc = auc(s.curve);
  s.s_measure = s_measure(pred, gt, params.s_alpha, evaluator);
  return s;
}

EvalReport aggregate(std::vector<ImageScores> images, std::vector<Skipped> skipped,
                     const MetricParams& params) {
  EvalReport r;
  r.params = params;
  r.skipped = std::move(skipped);
  r.per_image = std::move(images);
  const double n = static_cast<double>(r.per_image.size());
  if (r.per_image.empty()) return r;
  Aggregates& a = r.aggregates;
  bool all_s = true;
  double s_sum = 0.0;
  for (const auto& s : r.per_image) {
    a.mae += s.mae;
    a.precision += s.precision;
    a.recall += s.recall;
    a.f_measure += s.f_measure;
    a.auc += s.auc;
    if (s.s_measure) s_sum += *s.s_measure;
    else all_s = false;
    for (int k = 0; k < kCurvePoints; ++k) {
      r.mean_curve.precision[k] += s.curve.precision[k];
      r.mean_curve.recall[k] += s.curve.recall[k];
      r.mean_curve.f_measure[k] += s.curve.f_measure[k];
      r.mean_curve.fpr[k] += s.curve.fpr[k];
    }
  }
  a.mae /= n;
  a.precision /= n;
  a.recall /= n;
  a.f_measure /= n;
  a.auc /= n;
  if (all_s) a.s_measure = s_sum / n;
  for (int k = 0; k < kCurvePoints; ++k) {
    r.mean_curve.precision[k] /= n;
    r.mean_curve.recall[k] /= n;
    r.mean_curve.f_measure[k] /= n;
    r.mean_curve.fpr[k] /= n;
  }
  return r;
}

}  // namespace salpan::metrics
