#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "salpan/density.hpp"
#include "salpan/fusion.hpp"
#include "salpan/superpixel.hpp"

namespace salpan {

/// Region proposal method. Only Merge is implemented; GrabCut is a reserved
/// name that validate() rejects.
enum class RegionMethod { Merge, GrabCut };

struct PipelineConfig {
  SlicParams slic;

  struct Density {
    std::vector<int> radii = default_density_radii();
    int bins = 16;
    int regions = 8;
    double weight = 0.25;  ///< density feature weight in region merging
    RegionMethod method = RegionMethod::Merge;
  } density;

  struct Ranking {
    double alpha = 0.99;
    double sigma2 = 0.1;
    bool seeds_from_fixation = false;
  } ranking;

  struct Fixation {
    int resize = 64;
    double sigma_frac = 0.045;
    bool pool_keep_background = false;
  } fixation;

  struct Fusion {
    double mn_thresh = 0.1;
    MaximaNeighborhood mn_neighborhood = MaximaNeighborhood::Eight;
    bool mn_exclude_global = false;
  } fusion;

  struct Metrics {
    double beta2 = 0.3;
    double s_alpha = 0.5;
  } metrics;

  struct Io {
    bool dump_stages = false;
    int max_dim = 0;  ///< 0 keeps native resolution
  } io;
};

/// Every accepted key as "section.name", in canonical order.
const std::vector<std::string>& config_keys();

/// Throws InvalidArgument for an unknown key or a malformed value.
void set_config_value(PipelineConfig& cfg, std::string_view key, std::string_view value);
std::string get_config_value(const PipelineConfig& cfg, std::string_view key);

/// Throws InvalidArgument naming the first field outside its valid range.
void validate(const PipelineConfig& cfg);

/// Sectioned key = value text. '#' and ';' start comment lines. Keys may be
/// written bare inside a [section] or fully dotted anywhere. Unknown or
/// repeated keys are rejected. The result is validated.
PipelineConfig parse_config(std::string_view text);
PipelineConfig load_config(const std::filesystem::path& path);

/// Canonical form: every key, sections in fixed order.
std::string serialize_config(const PipelineConfig& cfg);

}  // namespace salpan
