#include "salpan/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace salpan {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, const char* expected) {
  throw InvalidArgument("config " + std::string(key) + ": '" + std::string(value) +
                        "' is not " + expected);
}

int parse_int(std::string_view key, std::string_view v) {
  int out = 0;
  auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || end != v.data() + v.size() || v.empty()) bad_value(key, v, "an integer");
  return out;
}

double parse_double(std::string_view key, std::string_view v) {
  double out = 0.0;
  auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || end != v.data() + v.size() || v.empty() || !std::isfinite(out))
    bad_value(key, v, "a finite number");
  return out;
}

bool parse_bool(std::string_view key, std::string_view v) {
  if (v == "true") return true;
  if (v == "false") return false;
  bad_value(key, v, "true or false");
}

std::vector<int> parse_ints(std::string_view key, std::string_view v) {
  std::vector<int> out;
  while (true) {
    const auto comma = v.find(',');
    out.push_back(parse_int(key, trim(v.substr(0, comma))));
    if (comma == std::string_view::npos) break;
    v = v.substr(comma + 1);
  }
  return out;
}

MaximaNeighborhood parse_neighborhood(std::string_view key, std::string_view v) {
  if (v == "8") return MaximaNeighborhood::Eight;
  if (v == "corners") return MaximaNeighborhood::Corners;
  bad_value(key, v, "8 or corners");
}

RegionMethod parse_method(std::string_view key, std::string_view v) {
  if (v == "merge") return RegionMethod::Merge;
  if (v == "grabcut") return RegionMethod::GrabCut;
  bad_value(key, v, "merge or grabcut");
}

std::string fmt(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

std::string fmt(int v) { return std::to_string(v); }
std::string fmt(bool v) { return v ? "true" : "false"; }

std::string fmt(const std::vector<int>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
  return out;
}

std::string fmt(RegionMethod m) { return m == RegionMethod::Merge ? "merge" : "grabcut"; }
std::string fmt(MaximaNeighborhood n) { return n == MaximaNeighborhood::Eight ? "8" : "corners"; }

struct Field {
  std::string key;
  std::function<void(PipelineConfig&, std::string_view, std::string_view)> set;
  std::function<std::string(const PipelineConfig&)> get;
};

#define SALPAN_FIELD(KEY, MEMBER, PARSE)                                                       \
  Field {                                                                                      \
    KEY, [](PipelineConfig& c, std::string_view k, std::string_view v) { c.MEMBER = PARSE(k, v); }, \
        [](const PipelineConfig& c) { return fmt(c.MEMBER); }                                  \
  }

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      SALPAN_FIELD("slic.k", slic.k, parse_int),
      SALPAN_FIELD("slic.compactness", slic.compactness, parse_double),
      SALPAN_FIELD("slic.iterations", slic.iterations, parse_int),
      SALPAN_FIELD("density.radii", density.radii, parse_ints),
      SALPAN_FIELD("density.bins", density.bins, parse_int),
      SALPAN_FIELD("density.regions", density.regions, parse_int),
      SALPAN_FIELD("density.weight", density.weight, parse_double),
      SALPAN_FIELD("density.method", density.method, parse_method),
      SALPAN_FIELD("ranking.alpha", ranking.alpha, parse_double),
      SALPAN_FIELD("ranking.sigma2", ranking.sigma2, parse_double),
      SALPAN_FIELD("ranking.seeds_from_fixation", ranking.seeds_from_fixation, parse_bool),
      SALPAN_FIELD("fixation.resize", fixation.resize, parse_int),
      SALPAN_FIELD("fixation.sigma_frac", fixation.sigma_frac, parse_double),
      SALPAN_FIELD("fixation.pool_keep_background", fixation.pool_keep_background, parse_bool),
      SALPAN_FIELD("fusion.mn_thresh", fusion.mn_thresh, parse_double),
      SALPAN_FIELD("fusion.mn_neighborhood", fusion.mn_neighborhood, parse_neighborhood),
      SALPAN_FIELD("fusion.mn_exclude_global", fusion.mn_exclude_global, parse_bool),
      SALPAN_FIELD("metrics.beta2", metrics.beta2, parse_double),
      SALPAN_FIELD("metrics.s_alpha", metrics.s_alpha, parse_double),
      SALPAN_FIELD("io.dump_stages", io.dump_stages, parse_bool),
      SALPAN_FIELD("io.max_dim", io.max_dim, parse_int),
  };
  return table;
}

#undef SALPAN_FIELD

const Field& find_field(std::string_view key) {
  for (const auto& f : fields())
    if (f.key == key) return f;
  throw InvalidArgument("unknown config key '" + std::string(key) + "'");
}

void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidArgument("config " + what);
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> out;
    for (const auto& f : fields()) out.push_back(f.key);
    return out;
  }();
  return keys;
}

void set_config_value(PipelineConfig& cfg, std::string_view key, std::string_view value) {
  find_field(key).set(cfg, key, trim(value));
}

std::string get_config_value(const PipelineConfig& cfg, std::string_view key) {
  return find_field(key).get(cfg);
}

void validate(const PipelineConfig& c) {
  require(c.slic.k >= 1, "slic.k must be >= 1");
  require(c.slic.compactness > 0.0, "slic.compactness must be positive");
  require(c.slic.iterations >= 1, "slic.iterations must be >= 1");
  const auto& r = c.density.radii;
  require(r.size() >= 3, "density.radii needs at least 3 radii");
  require(r.front() >= 1, "density.radii must be >= 1");
  require(std::adjacent_find(r.begin(), r.end(), std::greater_equal<>()) == r.end(),
          "density.radii must be strictly increasing");
  require(c.density.bins >= 2, "density.bins must be >= 2");
  require(c.density.regions >= 2, "density.regions must be >= 2");
  require(c.density.weight >= 0.0, "density.weight must be >= 0");
  require(c.density.method == RegionMethod::Merge,
          "density.method grabcut is reserved and not implemented; use merge");
  require(c.ranking.alpha > 0.0 && c.ranking.alpha < 1.0, "ranking.alpha must lie in (0,1)");
  require(c.ranking.sigma2 > 0.0, "ranking.sigma2 must be positive");
  require(c.fixation.resize >= 1, "fixation.resize must be >= 1");
  require(c.fixation.sigma_frac > 0.0, "fixation.sigma_frac must be positive");
  require(c.fusion.mn_thresh >= 0.0 && c.fusion.mn_thresh < 1.0,
          "fusion.mn_thresh must lie in [0,1)");
  require(c.metrics.beta2 > 0.0, "metrics.beta2 must be positive");
  require(c.metrics.s_alpha >= 0.0 && c.metrics.s_alpha <= 1.0,
          "metrics.s_alpha must lie in [0,1]");
  require(c.io.max_dim >= 0, "io.max_dim must be >= 0");
}

PipelineConfig parse_config(std::string_view text) {
  PipelineConfig cfg;
  std::set<std::string> seen;
  std::string section;
  int line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const std::string_view raw = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#' || line.front() == ';') continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']') throw InvalidArgument("config " + where + "unterminated section");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw InvalidArgument("config " + where + "expected key = value");
    const std::string name(trim(line.substr(0, eq)));
    std::string key = name.find('.') != std::string::npos || section.empty()
                          ? name
                          : section + "." + name;
    if (!seen.insert(key).second)
      throw InvalidArgument("config " + where + "repeated key '" + key + "'");
    try {
      set_config_value(cfg, key, line.substr(eq + 1));
    } catch (const InvalidArgument& e) {
      throw InvalidArgument(where + e.what());
    }
  }
  validate(cfg);
  return cfg;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string(), "cannot open config file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const PipelineConfig& cfg) {
  std::string out;
  std::string section;
  for (const auto& f : fields()) {
    const auto dot = f.key.find('.');
    const std::string sec = f.key.substr(0, dot);
    if (sec != section) {
      if (!section.empty()) out += '\n';
      out += "[" + sec + "]\n";
      section = sec;
    }
    out += f.key.substr(dot + 1) + " = " + f.get(cfg) + "\n";
  }
  return out;
}

}  // namespace salpan
