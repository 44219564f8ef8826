// salpan command-line front end: detect, stages, eval, print-config.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "salpan/config.hpp"
#include "salpan/image_io.hpp"
#include "salpan/metrics.hpp"
#include "salpan/parallel.hpp"
#include "salpan/pipeline.hpp"

namespace fs = std::filesystem;

namespace {

// Config file plus per-key overrides shared by every subcommand.
struct ConfigOptions {
  std::string file;
  std::map<std::string, std::string> overrides;
  bool mn_exclude_global = false;
  bool pool_keep_background = false;
  bool seeds_from_fixation = false;
  bool dump_stages = false;
  int max_dim = -1;

  void attach(CLI::App* app) {
    app->add_option("--config", file, "Config file (sectioned key = value)")->check(CLI::ExistingFile);
    for (const auto& key : salpan::config_keys())
      app->add_option("--" + key, overrides[key], "Override " + key)->group("Config keys");
    app->add_flag("--mn-exclude-global", mn_exclude_global,
                  "Leave the global maximum out of the maxima mean")
        ->group("Config shortcuts");
    app->add_flag("--pool-keep-background", pool_keep_background,
                  "Keep raw fixation values outside proposal regions")
        ->group("Config shortcuts");
    app->add_flag("--seeds-from-fixation", seeds_from_fixation,
                  "Seed foreground ranking from the pooled fixation map")
        ->group("Config shortcuts");
    app->add_flag("--dump-stages", dump_stages, "Write the intermediate stage maps")
        ->group("Config shortcuts");
    app->add_option("--max-dim", max_dim, "Downscale so the longest side is at most this (0 = off)")
        ->group("Config shortcuts");
  }

  salpan::PipelineConfig resolve(const CLI::App* app) const {
    salpan::PipelineConfig cfg = file.empty() ? salpan::PipelineConfig{} : salpan::load_config(file);
    for (const auto& key : salpan::config_keys())
      if (app->count("--" + key) > 0) salpan::set_config_value(cfg, key, overrides.at(key));
    if (mn_exclude_global) cfg.fusion.mn_exclude_global = true;
    if (pool_keep_background) cfg.fixation.pool_keep_background = true;
    if (seeds_from_fixation) cfg.ranking.seeds_from_fixation = true;
    if (dump_stages) cfg.io.dump_stages = true;
    if (max_dim >= 0) cfg.io.max_dim = max_dim;
    salpan::validate(cfg);
    return cfg;
  }
};

void print_warnings(const std::string& source, const std::vector<salpan::Warning>& warnings) {
  for (const auto& w : warnings)
    std::cerr << "warning: " << source << ": " << w.stage << ": " << w.message << '\n';
}

std::size_t thread_option(int requested) {
  return requested > 0 ? static_cast<std::size_t>(requested) : salpan::default_thread_count();
}

int run_detect(const std::vector<std::string>& inputs, const std::string& outdir,
               const salpan::PipelineConfig& cfg, std::size_t threads) {
  std::vector<fs::path> paths(inputs.begin(), inputs.end());
  const auto results = salpan::run_batch(paths, outdir, cfg, threads);
  int failures = 0;
  for (const auto& r : results) {
    print_warnings(r.input.string(), r.warnings);
    if (r.ok) {
      std::cout << r.output.string() << '\n';
    } else {
      std::cerr << "error: " << r.error << '\n';
      ++failures;
    }
  }
  return failures == 0 ? 0 : 1;
}

int run_stages(const std::string& input, const std::string& outdir,
               const salpan::PipelineConfig& cfg, std::size_t threads) {
  const auto result = salpan::detect_file(input, cfg, true, threads);
  print_warnings(input, result.diagnostics.warnings());
  salpan::write_stages(result.stages, outdir);
  for (auto name : salpan::kStageFiles) std::cout << (fs::path(outdir) / name).string() << '\n';
  return 0;
}

int run_eval(const std::string& pred_dir, const std::string& gt_dir, const std::string& report,
             const std::string& csv, const std::string& curves, const salpan::PipelineConfig& cfg,
             std::size_t threads) {
  salpan::metrics::MetricParams params{cfg.metrics.beta2, cfg.metrics.s_alpha};
  auto r = salpan::metrics::evaluate_directories(pred_dir, gt_dir, params, threads);
  r.config = {{"pred_dir", pred_dir},
              {"gt_dir", gt_dir},
              {"metrics.beta2", salpan::get_config_value(cfg, "metrics.beta2")},
              {"metrics.s_alpha", salpan::get_config_value(cfg, "metrics.s_alpha")}};
  for (const auto& s : r.skipped) std::cerr << "warning: skipped " << s.name << ": " << s.reason << '\n';
  salpan::io::write_text_atomic(report, salpan::metrics::report_json(r));
  if (!csv.empty()) salpan::io::write_text_atomic(csv, salpan::metrics::report_csv(r));
  if (!curves.empty()) {
    salpan::io::write_text_atomic(curves + "_pr.txt", salpan::metrics::pr_curve_text(r.mean_curve));
    salpan::io::write_text_atomic(curves + "_f.txt", salpan::metrics::f_curve_text(r.mean_curve));
  }
  const auto& a = r.aggregates;
  std::printf("images %zu  skipped %zu  mae %.6f  precision %.6f  recall %.6f  f %.6f  auc %.6f\n",
              r.per_image.size(), r.skipped.size(), a.mae, a.precision, a.recall, a.f_measure,
              a.auc);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Salient object detection for panoramic images"};
  app.require_subcommand(1);
  app.fallthrough();
  int threads = 0;
  app.add_option("--threads", threads, "Worker threads (default: SALPAN_THREADS or all cores)")
      ->check(CLI::NonNegativeNumber);

  ConfigOptions detect_opts;
  std::vector<std::string> detect_inputs;
  std::string detect_out;
  auto* detect = app.add_subcommand("detect", "Compute final saliency maps for images");
  detect->add_option("inputs", detect_inputs, "Input images")->required()->check(CLI::ExistingFile);
  detect->add_option("-o,--output", detect_out, "Output directory for <stem>.png maps")->required();
  detect_opts.attach(detect);

  ConfigOptions stages_opts;
  std::string stages_in;
  std::string stages_out;
  auto* stages = app.add_subcommand("stages", "Write all 11 intermediate stage maps for one image");
  stages->add_option("input", stages_in, "Input image")->required()->check(CLI::ExistingFile);
  stages->add_option("outdir", stages_out, "Output directory")->required();
  stages_opts.attach(stages);

  ConfigOptions eval_opts;
  std::string pred_dir;
  std::string gt_dir;
  std::string report = "report.json";
  std::string csv;
  std::string curves;
  auto* eval = app.add_subcommand("eval", "Score prediction maps against ground-truth masks");
  eval->add_option("pred_dir", pred_dir, "Directory of predicted maps")->required()->check(CLI::ExistingDirectory);
  eval->add_option("gt_dir", gt_dir, "Directory of ground-truth masks")->required()->check(CLI::ExistingDirectory);
  eval->add_option("-o,--report", report, "JSON report path")->capture_default_str();
  eval->add_option("--csv", csv, "Also write a per-image CSV");
  eval->add_option("--curves", curves, "Write <prefix>_pr.txt and <prefix>_f.txt curve files");
  eval_opts.attach(eval);

  ConfigOptions print_opts;
  auto* print = app.add_subcommand("print-config", "Print the effective configuration");
  print_opts.attach(print);

  CLI11_PARSE(app, argc, argv);

  try {
    const std::size_t nthreads = thread_option(threads);
    if (*detect)
      return run_detect(detect_inputs, detect_out, detect_opts.resolve(detect), nthreads);
    if (*stages) return run_stages(stages_in, stages_out, stages_opts.resolve(stages), nthreads);
    if (*eval)
      return run_eval(pred_dir, gt_dir, report, csv, curves, eval_opts.resolve(eval), nthreads);
    if (*print) {
      std::cout << salpan::serialize_config(print_opts.resolve(print));
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
