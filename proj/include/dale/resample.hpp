#pragma once

#include <string>

#include "dale/raster.hpp"

namespace dale {

// Nearest-neighbour resampling; source index = floor((i + 0.5) * old / new).
template <typename Scalar>
Raster<Scalar> resize_nearest(const Raster<Scalar>& src, int new_height, int new_width) {
  if (new_height < 1 || new_width < 1) throw ArgumentError("resize target must be at least 1x1");
  Raster<Scalar> out(new_height, new_width, src.channels());
  for (int r = 0; r < new_height; ++r) {
    // (2i + 1) * old / (2 * new) in integers avoids rounding at exact cell edges.
    const int sr = static_cast<int>((std::int64_t(2 * r + 1) * src.height()) / (2 * std::int64_t(new_height)));
    for (int c = 0; c < new_width; ++c) {
      const int sc = static_cast<int>((std::int64_t(2 * c + 1) * src.width()) / (2 * std::int64_t(new_width)));
      for (int k = 0; k < src.channels(); ++k) out(r, c, k) = src(sr, sc, k);
    }
  }
  return out;
}

template <typename Scalar>
BasicImage<Scalar> resize_nearest(const BasicImage<Scalar>& src, int new_height, int new_width) {
  return BasicImage<Scalar>(resize_nearest(src.raster(), new_height, new_width));
}

template <typename Scalar>
Raster<Scalar> crop(const Raster<Scalar>& src, int top, int left, int height, int width) {
  if (top < 0 || left < 0 || height < 1 || width < 1 || top + height > src.height() ||
      left + width > src.width()) {
    throw ArgumentError("crop window " + std::to_string(height) + "x" + std::to_string(width) + "@(" +
                        std::to_string(top) + "," + std::to_string(left) + ") is outside " +
                        src.shape_string());
  }
  Raster<Scalar> out(height, width, src.channels());
  const int row_len = width * src.channels();
  for (int r = 0; r < height; ++r) {
    out.samples().segment(out.index(r, 0), row_len) = src.samples().segment(src.index(top + r, left), row_len);
  }
  return out;
}

template <typename Scalar>
BasicImage<Scalar> crop(const BasicImage<Scalar>& src, int top, int left, int height, int width) {
  return BasicImage<Scalar>(crop(src.raster(), top, left, height, width));
}

// 2x2 box average (odd trailing row/column dropped).
template <typename Scalar>
Raster<Scalar> downsample_box2(const Raster<Scalar>& src) {
  const int h = src.height() / 2;
  const int w = src.width() / 2;
  if (h < 1 || w < 1) throw ArgumentError("image too small to halve: " + src.shape_string());
  Raster<Scalar> out(h, w, src.channels());
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      for (int k = 0; k < src.channels(); ++k) {
        out(r, c, k) = (src(2 * r, 2 * c, k) + src(2 * r, 2 * c + 1, k) + src(2 * r + 1, 2 * c, k) +
                        src(2 * r + 1, 2 * c + 1, k)) /
                       Scalar(4);
      }
    }
  }
  return out;
}

}  // namespace dale
