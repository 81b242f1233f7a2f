#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>
#include <string>

#include "dale/raster.hpp"

namespace dale::test {

inline Image random_image(int h, int w, int c, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Raster<double> r(h, w, c);
  for (auto& v : r.samples()) v = u(rng);
  return Image(std::move(r));
}

// Smooth blobs plus mild noise; gives SLIC something to segment.
inline Image scene_image(int h, int w, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double fx[3], fy[3], ph[3];
  for (int k = 0; k < 3; ++k) {
    fx[k] = 1.0 + 5.0 * u(rng);
    fy[k] = 1.0 + 5.0 * u(rng);
    ph[k] = 6.28 * u(rng);
  }
  Raster<double> r(h, w, 3);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int k = 0; k < 3; ++k) {
        const double s = std::sin(fx[k] * x / w * 6.28 + ph[k]) * std::cos(fy[k] * y / h * 6.28);
        r(y, x, k) = std::clamp(0.5 + 0.4 * s + 0.05 * (u(rng) - 0.5), 0.0, 1.0);
      }
    }
  }
  return Image(std::move(r));
}

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() / ("dale_" + tag + "_" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace dale::test
