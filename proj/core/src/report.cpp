#include <algorithm>
#include <charconv>
#include <map>
#include <sstream>

#include <json.hpp>

#include "salpan/image_io.hpp"
#include "salpan/metrics.hpp"
#include "salpan/parallel.hpp"

namespace salpan::metrics {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

// stem -> file; later duplicates of a stem are reported as skipped.
std::map<std::string, fs::path> index_dir(const fs::path& dir, const char* role,
                                          std::vector<Skipped>& skipped) {
  if (!fs::is_directory(dir)) throw IoError(dir.string(), "not a directory");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const auto name = entry.path().filename().string();
    if (name.empty() || name.front() == '.') continue;
    files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::map<std::string, fs::path> out;
  for (const auto& f : files) {
    auto [it, inserted] = out.emplace(f.stem().string(), f);
    if (!inserted)
      skipped.push_back({f.filename().string(), std::string("duplicate ") + role + " stem, using " +
                                                    it->second.filename().string()});
  }
  return out;
}

std::string fmt(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

Json curve_json(const Curve& c) {
  auto arr = [](const std::array<double, kCurvePoints>& a) {
    return Json(std::vector<double>(a.begin(), a.end()));
  };
  std::vector<double> thresholds(kCurvePoints);
  for (int k = 0; k < kCurvePoints; ++k) thresholds[k] = k / 255.0;
  Json j;
  j["thresholds"] = thresholds;
  j["precision"] = arr(c.precision);
  j["recall"] = arr(c.recall);
  j["f_measure"] = arr(c.f_measure);
  j["fpr"] = arr(c.fpr);
  return j;
}

Json optional_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

}  // namespace

EvalReport evaluate_directories(const fs::path& pred_dir, const fs::path& gt_dir,
                                const MetricParams& params, std::size_t threads,
                                const StructureEvaluator* evaluator) {
  std::vector<Skipped> skipped;
  const auto preds = index_dir(pred_dir, "prediction", skipped);
  const auto gts = index_dir(gt_dir, "ground-truth", skipped);

  std::vector<std::pair<fs::path, fs::path>> pairs;
  std::vector<std::string> names;
  for (const auto& [stem, path] : preds) {
    auto it = gts.find(stem);
    if (it == gts.end()) {
      skipped.push_back({path.filename().string(), "no matching ground truth"});
      continue;
    }
    pairs.emplace_back(path, it->second);
    names.push_back(stem);
  }
  for (const auto& [stem, path] : gts)
    if (!preds.count(stem)) skipped.push_back({path.filename().string(), "no matching prediction"});
  if (pairs.empty())
    throw InvalidArgument("evaluate: no file stems shared between " + pred_dir.string() + " and " +
                          gt_dir.string());

  std::vector<std::optional<ImageScores>> scored(pairs.size());
  std::vector<std::string> failures(pairs.size());
  parallel_for(0, pairs.size(), threads, [&](std::size_t i) {
    try {
      const GroundTruthMask gt = io::read_mask(pairs[i].second);
      SaliencyMap pred = io::read_map(pairs[i].first);
      if (pred.width() != gt.width() || pred.height() != gt.height())
        pred = resize_bilinear(pred, gt.width(), gt.height());
      scored[i] = score_image(names[i], pred, gt, params, evaluator);
    } catch (const std::exception& e) {
      failures[i] = e.what();
    }
  });

  std::vector<ImageScores> images;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (scored[i]) images.push_back(std::move(*scored[i]));
    else skipped.push_back({names[i], failures[i]});
  }
  if (images.empty()) throw InvalidArgument("evaluate: no image pair could be scored");
  std::sort(skipped.begin(), skipped.end(),
            [](const Skipped& a, const Skipped& b) { return a.name < b.name; });
  return aggregate(std::move(images), std::move(skipped), params);
}

std::string report_json(const EvalReport& r) {
  Json j;
  j["schema"] = 1;
  Json config = Json::object();
  for (const auto& [k, v] : r.config) config[k] = v;
  j["config"] = config;
  j["metadata"] = {
      {"threshold", "adaptive: min(2 * mean(pred), 1), prediction >= threshold"},
      {"beta2", r.params.beta2},
      {"s_alpha", r.params.s_alpha},
      {"mae", "per-pixel mean absolute error per image, then mean over images"},
      {"auc", "ROC area, trapezoid rule over thresholds k/255 of the 8-bit map plus (0,0)"},
      {"empty_prediction_precision", 1},
      {"s_measure", r.aggregates.s_measure ? "computed" : "not computed: no structure evaluator"},
  };
  Json per = Json::array();
  for (const auto& s : r.per_image) {
    per.push_back({{"name", s.name},
                   {"mae", s.mae},
                   {"precision", s.precision},
                   {"recall", s.recall},
                   {"f_measure", s.f_measure},
                   {"s_measure", optional_json(s.s_measure)},
                   {"auc", s.auc},
                   {"threshold", s.threshold}});
  }
  j["per_image"] = per;
  const auto& a = r.aggregates;
  j["aggregates"] = {{"count", r.per_image.size()},
                     {"mae", a.mae},
                     {"precision", a.precision},
                     {"recall", a.recall},
                     {"f_measure", a.f_measure},
                     {"s_measure", optional_json(a.s_measure)},
                     {"auc", a.auc}};
  j["auc"] = a.auc;
  j["curves"] = curve_json(r.mean_curve);
  Json skipped = Json::array();
  for (const auto& s : r.skipped) skipped.push_back({{"name", s.name}, {"reason", s.reason}});
  j["skipped"] = skipped;
  return j.dump(2) + "\n";
}

std::string report_csv(const EvalReport& r) {
  std::ostringstream out;
  out << "name,mae,precision,recall,f_measure,s_measure,auc,threshold\n";
  for (const auto& s : r.per_image) {
    std::string name = s.name;
    if (name.find_first_of(",\"\n") != std::string::npos) {
      std::string q = "\"";
      for (char c : name) q += c == '"' ? std::string("\"\"") : std::string(1, c);
      name = q + "\"";
    }
    out << name << ',' << fmt(s.mae) << ',' << fmt(s.precision) << ',' << fmt(s.recall) << ','
        << fmt(s.f_measure) << ',' << (s.s_measure ? fmt(*s.s_measure) : "") << ',' << fmt(s.auc)
        << ',' << fmt(s.threshold) << '\n';
  }
  return out.str();
}

std::string pr_curve_text(const Curve& c) {
  std::string out;
  for (int k = 0; k < kCurvePoints; ++k) out += fmt(c.recall[k]) + ' ' + fmt(c.precision[k]) + '\n';
  return out;
}

std::string f_curve_text(const Curve& c) {
  std::string out;
  for (int k = 0; k < kCurvePoints; ++k) out += fmt(k / 255.0) + ' ' + fmt(c.f_measure[k]) + '\n';
  return out;
}

}  // namespace salpan::metrics
