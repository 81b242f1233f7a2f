#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "dale/color.hpp"
#include "dale/raster.hpp"

namespace dale {

struct SlicParams {
  int k = 256;                   // target superpixel count
  double compactness = 10.0;     // m
  int max_iters = 10;
  double min_region_frac = 0.25; // components below frac * S^2 are absorbed

  void validate() const;
};

// Dense partition of the image plane into 4-connected regions [0, count).
class SuperpixelLabels {
 public:
  SuperpixelLabels(LabelRaster labels, int count);

  int height() const noexcept { return labels_.height(); }
  int width() const noexcept { return labels_.width(); }
  int count() const noexcept { return count_; }
  std::int32_t operator()(int row, int col) const { return labels_(row, col); }
  const LabelRaster& raster() const noexcept { return labels_; }
  std::vector<std::int64_t> region_sizes() const;

  friend bool operator==(const SuperpixelLabels&, const SuperpixelLabels&) = default;

 private:
  LabelRaster labels_;
  int count_;
};

// Grid layout used to seed cluster centers: `cols` x `rows` cells.
struct SeedGrid {
  int rows;
  int cols;
};
SeedGrid slic_seed_grid(int height, int width, int k);
int slic_grid_step(int height, int width, int k);

SuperpixelLabels slic(const Image& image, const SlicParams& params = {});

// Relabels 4-connected components, absorbs components smaller than
// `min_size` into their largest neighbour and renumbers densely in raster order.
SuperpixelLabels enforce_connectivity(const LabelRaster& labels, std::int64_t min_size);

// Raster-order dense renumbering; region count is returned alongside.
SuperpixelLabels relabel_dense(const LabelRaster& labels);

inline constexpr std::array<double, 3> kBoundaryColor = {1.0, 0.0, 0.0};

// Paints pixels with a 4-neighbour of a different label in kBoundaryColor
// (gray images are painted white).
Image boundary_overlay(const Image& image, const SuperpixelLabels& labels);

struct RegionSummary {
  int id;
  std::int64_t size;
  std::array<double, 3> mean_lab;
};
std::vector<RegionSummary> summarize_regions(const LabImage& lab, const SuperpixelLabels& labels);

// Raw ids as 16-bit gray; throws ArgumentError when count > 65535.
Raster<std::uint16_t> labels_to_u16(const SuperpixelLabels& labels);

}  // namespace dale
