#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "dale/raster.hpp"
#include "dale/slic.hpp"

namespace dale {

// Darkening weight L in {0.1, 0.2, ..., 1.0}, held as an integer count of tenths.
class IlluminationLevel {
 public:
  static constexpr int kLevels = 10;

  static IlluminationLevel from_tenths(int tenths);
  // Accepts only values within 1e-9 of a member of the discrete set.
  static IlluminationLevel from_value(double value);

  int tenths() const noexcept { return tenths_; }
  double value() const noexcept { return tenths_ / 10.0; }

  friend bool operator==(IlluminationLevel, IlluminationLevel) = default;

 private:
  explicit IlluminationLevel(int tenths) : tenths_(tenths) {}
  int tenths_;
};

IlluminationLevel draw_level(std::uint64_t seed, std::uint64_t region);

enum class IlluminationMode { superpixel, quadtree, global };

std::string_view to_string(IlluminationMode mode);
IlluminationMode parse_mode(std::string_view text);

struct Rect {
  int top = 0;
  int left = 0;
  int height = 0;
  int width = 0;

  friend bool operator==(const Rect&, const Rect&) = default;
};

struct QuadLeaf {
  std::int32_t id;
  Rect rect;

  friend bool operator==(const QuadLeaf&, const QuadLeaf&) = default;
};

struct WholeFrame {
  int height;
  int width;

  friend bool operator==(const WholeFrame&, const WholeFrame&) = default;
};

// Superpixel ids per pixel (not necessarily dense after cropping), quad-tree
// leaves, or the whole frame as region 0.
using RegionGeometry = std::variant<LabelRaster, std::vector<QuadLeaf>, WholeFrame>;

struct IlluminationSpec {
  IlluminationMode mode = IlluminationMode::global;
  std::uint64_t seed = 0;
  std::map<std::int32_t, IlluminationLevel> levels;
  RegionGeometry regions = WholeFrame{1, 1};
  // Patch position in the parent frame, for cropped samples.
  std::optional<Rect> window;
};

// Per-pixel region id map of the geometry.
LabelRaster region_map(const RegionGeometry& regions);
std::pair<int, int> region_extent(const RegionGeometry& regions);

struct SamplePair {
  Image ground_truth;
  Image low_light;
  FloatMap attention;  // ground_truth - low_light, 3 channels for RGB input
  IlluminationSpec spec;
};

// low(p) = image(p) * L(region(p)); attention = image - low.
SamplePair apply_illumination(const Image& image, IlluminationSpec spec);

SamplePair synthesize_local(const Image& image, const SuperpixelLabels& labels, std::uint64_t seed);

SamplePair synthesize_global(const Image& image, double level);
SamplePair synthesize_global_random(const Image& image, std::uint64_t seed);

struct QuadtreeParams {
  int max_depth = 3;
  double split_prob = 0.7;
};

std::vector<QuadLeaf> quadtree_leaves(int height, int width, std::uint64_t seed, const QuadtreeParams& params);
SamplePair synthesize_quadtree(const Image& image, std::uint64_t seed, const QuadtreeParams& params = {});

// Elementwise sum clamped to [0, 1].
Image reconstruct(const Image& low_light, const FloatMap& attention);

std::vector<Rect> patch_windows(int height, int width, int patch, int count, std::uint64_t seed);
SamplePair crop_pair(const SamplePair& pair, const Rect& window);
std::vector<SamplePair> crop_pairs(const SamplePair& pair, int patch, int count, std::uint64_t seed);

// Snaps low_light to the 2^depth - 1 grid and recomputes attention against it,
// so the stored low-light PNG plus the stored attention map rebuild the
// ground truth up to float32 rounding.
SamplePair quantize_pair(const SamplePair& pair, int bit_depth);

}  // namespace dale
