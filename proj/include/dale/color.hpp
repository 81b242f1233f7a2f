#pragma once

#include "dale/raster.hpp"

namespace dale {

// CIELAB image; channel 0 is L* in [0, 100], channels 1/2 are a*, b*.
class LabImage {
 public:
  explicit LabImage(Raster<double> lab);

  int height() const noexcept { return lab_.height(); }
  int width() const noexcept { return lab_.width(); }
  double lightness(int row, int col) const { return lab_(row, col, 0); }
  double a(int row, int col) const { return lab_(row, col, 1); }
  double b(int row, int col) const { return lab_(row, col, 2); }
  const Raster<double>& raster() const noexcept { return lab_; }

 private:
  Raster<double> lab_;
};

// sRGB (D65) -> linear -> XYZ -> CIELAB. Throws ChannelCountError on gray input.
LabImage rgb_to_lab(const Image& image);

// Per-pixel maximum over channels.
FloatMap lightness(const Image& image);

// Rec.601 luma scaled to [0, 255]. Gray input is only rescaled.
FloatMap luminance_255(const Image& image);

}  // namespace dale
