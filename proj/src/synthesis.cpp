#include "dale/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "dale/io.hpp"
#include "dale/keyed_random.hpp"
#include "dale/resample.hpp"

namespace dale {

IlluminationLevel IlluminationLevel::from_tenths(int tenths) {
  if (tenths < 1 || tenths > kLevels) {
    throw ArgumentError("illumination level must be one of 0.1 .. 1.0");
  }
  return IlluminationLevel(tenths);
}

IlluminationLevel IlluminationLevel::from_value(double value) {
  const double scaled = value * 10.0;
  const double nearest = std::round(scaled);
  if (!std::isfinite(value) || std::abs(scaled - nearest) > 1e-9) {
    throw ArgumentError("illumination level " + std::to_string(value) + " is not in {0.1, ..., 1.0}");
  }
  return from_tenths(static_cast<int>(nearest));
}

IlluminationLevel draw_level(std::uint64_t seed, std::uint64_t region) {
  return IlluminationLevel::from_tenths(
      1 + static_cast<int>(keyed_below(seed, Stream::region_level, region, IlluminationLevel::kLevels)));
}

std::string_view to_string(IlluminationMode mode) {
  switch (mode) {
    case IlluminationMode::superpixel:
      return "superpixel";
    case IlluminationMode::quadtree:
      return "quadtree";
    case IlluminationMode::global:
      return "global";
  }
  return "global";
}

IlluminationMode parse_mode(std::string_view text) {
  if (text == "superpixel") return IlluminationMode::superpixel;
  if (text == "quadtree") return IlluminationMode::quadtree;
  if (text == "global") return IlluminationMode::global;
  throw ArgumentError("unknown illumination mode '" + std::string(text) + "'");
}

std::pair<int, int> region_extent(const RegionGeometry& regions) {
  if (const auto* labels = std::get_if<LabelRaster>(&regions)) return {labels->height(), labels->width()};
  if (const auto* frame = std::get_if<WholeFrame>(&regions)) return {frame->height, frame->width};
  const auto& leaves = std::get<std::vector<QuadLeaf>>(regions);
  int h = 0, w = 0;
  for (const auto& leaf : leaves) {
    h = std::max(h, leaf.rect.top + leaf.rect.height);
    w = std::max(w, leaf.rect.left + leaf.rect.width);
  }
  return {h, w};
}

LabelRaster region_map(const RegionGeometry& regions) {
  if (const auto* labels = std::get_if<LabelRaster>(&regions)) return *labels;
  const auto [h, w] = region_extent(regions);
  LabelRaster out(h, w, 1);
  if (const auto* leaves = std::get_if<std::vector<QuadLeaf>>(&regions)) {
    out.samples().setConstant(-1);
    for (const auto& leaf : *leaves) {
      for (int r = leaf.rect.top; r < leaf.rect.top + leaf.rect.height; ++r) {
        for (int c = leaf.rect.left; c < leaf.rect.left + leaf.rect.width; ++c) out(r, c) = leaf.id;
      }
    }
    if ((out.samples() < 0).any()) throw ArgumentError("quad-tree leaves do not tile the frame");
  }
  return out;
}

SamplePair apply_illumination(const Image& image, IlluminationSpec spec) {
  const LabelRaster ids = region_map(spec.regions);
  if (!ids.same_extent(image.raster())) {
    throw DimensionMismatch("region map " + ids.shape_string() + " does not match image " +
                            image.raster().shape_string());
  }
  // Dense lookup table from region id to L.
  const std::int32_t max_id = ids.samples().maxCoeff();
  std::vector<double> weight(static_cast<std::size_t>(max_id) + 1, -1.0);
  for (const auto& [id, level] : spec.levels) {
    if (id >= 0 && id <= max_id) weight[static_cast<std::size_t>(id)] = level.value();
  }
  const int channels = image.channels();
  Raster<double> low = image.raster();
  for (Eigen::Index p = 0; p < ids.size(); ++p) {
    const double w = weight[static_cast<std::size_t>(ids.samples()[p])];
    if (w < 0.0) throw ArgumentError("region " + std::to_string(ids.samples()[p]) + " has no illumination level");
    low.samples().segment(p * channels, channels) *= w;
  }
  FloatMap attention(image.height(), image.width(), channels, image.samples() - low.samples());
  return {image, Image(std::move(low)), std::move(attention), std::move(spec)};
}

SamplePair synthesize_local(const Image& image, const SuperpixelLabels& labels, std::uint64_t seed) {
  if (image.height() != labels.height() || image.width() != labels.width()) {
    throw DimensionMismatch("superpixel labels do not match image size");
  }
  IlluminationSpec spec;
  spec.mode = IlluminationMode::superpixel;
  spec.seed = seed;
  for (int r = 0; r < labels.count(); ++r) spec.levels.emplace(r, draw_level(seed, static_cast<std::uint64_t>(r)));
  spec.regions = labels.raster();
  return apply_illumination(image, std::move(spec));
}

SamplePair synthesize_global(const Image& image, double level) {
  IlluminationSpec spec;
  spec.mode = IlluminationMode::global;
  spec.levels.emplace(0, IlluminationLevel::from_value(level));
  spec.regions = WholeFrame{image.height(), image.width()};
  return apply_illumination(image, std::move(spec));
}

SamplePair synthesize_global_random(const Image& image, std::uint64_t seed) {
  IlluminationSpec spec;
  spec.mode = IlluminationMode::global;
  spec.seed = seed;
  spec.levels.emplace(0, IlluminationLevel::from_tenths(
                             1 + static_cast<int>(keyed_below(seed, Stream::global_level, 0, IlluminationLevel::kLevels))));
  spec.regions = WholeFrame{image.height(), image.width()};
  return apply_illumination(image, std::move(spec));
}

namespace {

void split_node(const Rect& rect, int depth, int qy, int qx, std::uint64_t seed, const QuadtreeParams& params,
                std::vector<QuadLeaf>& leaves) {
  const bool can_split = depth < params.max_depth && rect.height >= 2 && rect.width >= 2;
  // Node key: depth plus quadrant coordinates at that depth.
  const std::uint64_t key = (std::uint64_t(depth) << 48) | (std::uint64_t(qy) << 24) | std::uint64_t(qx);
  if (can_split && keyed_unit(seed, Stream::quadtree_split, key) < params.split_prob) {
    const int top_h = rect.height / 2, left_w = rect.width / 2;
    const Rect quads[4] = {
        {rect.top, rect.left, top_h, left_w},
        {rect.top, rect.left + left_w, top_h, rect.width - left_w},
        {rect.top + top_h, rect.left, rect.height - top_h, left_w},
        {rect.top + top_h, rect.left + left_w, rect.height - top_h, rect.width - left_w},
    };
    for (int q = 0; q < 4; ++q) {
      split_node(quads[q], depth + 1, 2 * qy + q / 2, 2 * qx + q % 2, seed, params, leaves);
    }
    return;
  }
  leaves.push_back({static_cast<std::int32_t>(leaves.size()), rect});
}

}  // namespace

std::vector<QuadLeaf> quadtree_leaves(int height, int width, std::uint64_t seed, const QuadtreeParams& params) {
  if (params.max_depth < 0) throw ArgumentError("quad-tree max_depth must be >= 0");
  if (!(params.split_prob >= 0.0 && params.split_prob <= 1.0)) {
    throw ArgumentError("quad-tree split_prob must be in [0, 1]");
  }
  std::vector<QuadLeaf> leaves;
  split_node({0, 0, height, width}, 0, 0, 0, seed, params, leaves);
  return leaves;
}

SamplePair synthesize_quadtree(const Image& image, std::uint64_t seed, const QuadtreeParams& params) {
  IlluminationSpec spec;
  spec.mode = IlluminationMode::quadtree;
  spec.seed = seed;
  auto leaves = quadtree_leaves(image.height(), image.width(), seed, params);
  for (const auto& leaf : leaves) spec.levels.emplace(leaf.id, draw_level(seed, static_cast<std::uint64_t>(leaf.id)));
  spec.regions = std::move(leaves);
  return apply_illumination(image, std::move(spec));
}

Image reconstruct(const Image& low_light, const FloatMap& attention) {
  if (!attention.same_shape(low_light.raster())) {
    throw DimensionMismatch("attention map " + attention.shape_string() + " does not match image " +
                            low_light.raster().shape_string());
  }
  Raster<double> sum(low_light.height(), low_light.width(), low_light.channels(),
                     low_light.samples() + attention.samples());
  return Image::clamped(std::move(sum));
}

std::vector<Rect> patch_windows(int height, int width, int patch, int count, std::uint64_t seed) {
  if (patch < 1) throw ArgumentError("patch size must be positive");
  if (count < 0) throw ArgumentError("patch count must be >= 0");
  if (height < patch || width < patch) {
    throw ArgumentError("image " + std::to_string(height) + "x" + std::to_string(width) +
                        " is smaller than the " + std::to_string(patch) + "px patch");
  }
  std::vector<Rect> windows;
  windows.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const auto top = keyed_below(seed, Stream::patch_window, 2 * std::uint64_t(i), std::uint64_t(height - patch) + 1);
    const auto left = keyed_below(seed, Stream::patch_window, 2 * std::uint64_t(i) + 1, std::uint64_t(width - patch) + 1);
    windows.push_back({static_cast<int>(top), static_cast<int>(left), patch, patch});
  }
  return windows;
}

SamplePair crop_pair(const SamplePair& pair, const Rect& win) {
  const auto cut = [&](const auto& x) { return crop(x, win.top, win.left, win.height, win.width); };

  IlluminationSpec spec;
  spec.mode = pair.spec.mode;
  spec.seed = pair.spec.seed;
  Rect parent = win;
  if (pair.spec.window) {
    parent.top += pair.spec.window->top;
    parent.left += pair.spec.window->left;
  }
  spec.window = parent;

  std::set<std::int32_t> present;
  if (const auto* labels = std::get_if<LabelRaster>(&pair.spec.regions)) {
    LabelRaster sub = cut(*labels);
    present.insert(sub.samples().begin(), sub.samples().end());
    spec.regions = std::move(sub);
  } else if (const auto* leaves = std::get_if<std::vector<QuadLeaf>>(&pair.spec.regions)) {
    std::vector<QuadLeaf> kept;
    for (const auto& leaf : *leaves) {
      const int top = std::max(leaf.rect.top, win.top);
      const int left = std::max(leaf.rect.left, win.left);
      const int bottom = std::min(leaf.rect.top + leaf.rect.height, win.top + win.height);
      const int right = std::min(leaf.rect.left + leaf.rect.width, win.left + win.width);
      if (bottom <= top || right <= left) continue;
      kept.push_back({leaf.id, {top - win.top, left - win.left, bottom - top, right - left}});
      present.insert(leaf.id);
    }
    spec.regions = std::move(kept);
  } else {
    spec.regions = WholeFrame{win.height, win.width};
    present.insert(0);
  }
  for (const auto& [id, level] : pair.spec.levels) {
    if (present.count(id)) spec.levels.emplace(id, level);
  }
  return {cut(pair.ground_truth), cut(pair.low_light), cut(pair.attention), std::move(spec)};
}

std::vector<SamplePair> crop_pairs(const SamplePair& pair, int patch, int count, std::uint64_t seed) {
  std::vector<SamplePair> out;
  for (const Rect& win : patch_windows(pair.ground_truth.height(), pair.ground_truth.width(), patch, count, seed)) {
    out.push_back(crop_pair(pair, win));
  }
  return out;
}

SamplePair quantize_pair(const SamplePair& pair, int bit_depth) {
  Image low = quantize(pair.low_light, bit_depth);
  FloatMap attention(low.height(), low.width(), low.channels(), pair.ground_truth.samples() - low.samples());
  return {pair.ground_truth, std::move(low), std::move(attention), pair.spec};
}

}  // namespace dale
