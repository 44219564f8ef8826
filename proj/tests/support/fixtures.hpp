#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "salpan/raster.hpp"

namespace salpan::testing {

/// Uniform double in [0,1) from the top 53 bits; portable across standard
/// libraries, unlike std::uniform_real_distribution.
inline double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Owning copy of a value span, for container comparisons.
inline std::vector<double> vec(std::span<const double> v) { return {v.begin(), v.end()}; }

struct Fixture {
  std::string name;
  Raster rgb;
  GroundTruthMask gt;
};

inline constexpr int kFixtureCount = 10;

/// Synthetic scene `index` in [0, kFixtureCount): disks, squares and
/// multi-object layouts over textured backgrounds, deterministic per index.
Fixture make_fixture(int index, int width = 1024, int height = 512);

/// Flat background with one centered disk of radius min(w,h)/4.
Fixture make_disk_on_flat(int width, int height);

/// Random plane of values in [lo, hi).
std::vector<double> random_values(std::mt19937_64& rng, std::size_t n, double lo = 0.0,
                                  double hi = 1.0);

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const noexcept { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
  std::filesystem::path path_;
};

}  // namespace salpan::testing
