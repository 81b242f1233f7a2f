#pragma once

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>

#include "dale/errors.hpp"

namespace dale {

// Dense H x W x C raster, row-major with interleaved channels.
template <typename Scalar>
class Raster {
 public:
  using Samples = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

  Raster() = default;

  Raster(int height, int width, int channels)
      : Raster(height, width, channels, Samples::Zero(checked_size(height, width, channels))) {}

  Raster(int height, int width, int channels, Samples samples)
      : height_(height), width_(width), channels_(channels), samples_(std::move(samples)) {
    if (samples_.size() != checked_size(height, width, channels)) {
      throw ArgumentError("raster sample count does not match " + shape_string());
    }
  }

  static Raster constant(int height, int width, int channels, Scalar value) {
    return Raster(height, width, channels,
                  Samples::Constant(checked_size(height, width, channels), value));
  }

  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }
  int channels() const noexcept { return channels_; }
  Eigen::Index pixel_count() const noexcept { return Eigen::Index(height_) * width_; }
  Eigen::Index size() const noexcept { return samples_.size(); }
  bool empty() const noexcept { return samples_.size() == 0; }

  Eigen::Index index(int row, int col, int ch = 0) const noexcept {
    return (Eigen::Index(row) * width_ + col) * channels_ + ch;
  }
  Scalar operator()(int row, int col, int ch = 0) const { return samples_[index(row, col, ch)]; }
  Scalar& operator()(int row, int col, int ch = 0) { return samples_[index(row, col, ch)]; }

  const Samples& samples() const noexcept { return samples_; }
  Samples& samples() noexcept { return samples_; }

  // One channel as a strided view over the interleaved samples.
  auto channel(int ch) const {
    return Eigen::Map<const Samples, 0, Eigen::InnerStride<>>(samples_.data() + ch, pixel_count(),
                                                              Eigen::InnerStride<>(channels_));
  }
  auto channel(int ch) {
    return Eigen::Map<Samples, 0, Eigen::InnerStride<>>(samples_.data() + ch, pixel_count(),
                                                        Eigen::InnerStride<>(channels_));
  }

  template <typename Other>
  bool same_shape(const Raster<Other>& other) const noexcept {
    return height_ == other.height() && width_ == other.width() && channels_ == other.channels();
  }
  template <typename Other>
  bool same_extent(const Raster<Other>& other) const noexcept {
    return height_ == other.height() && width_ == other.width();
  }

  template <typename To>
  Raster<To> cast() const {
    return Raster<To>(height_, width_, channels_, samples_.template cast<To>());
  }

  std::string shape_string() const {
    return std::to_string(height_) + "x" + std::to_string(width_) + "x" + std::to_string(channels_);
  }

  friend bool operator==(const Raster& a, const Raster& b) {
    return a.same_shape(b) && (a.samples_ == b.samples_).all();
  }

 private:
  static Eigen::Index checked_size(int height, int width, int channels) {
    if (height < 1 || width < 1) throw ArgumentError("raster dimensions must be positive");
    if (channels < 1) throw ArgumentError("raster needs at least one channel");
    return Eigen::Index(height) * width * channels;
  }

  int height_ = 0;
  int width_ = 0;
  int channels_ = 0;
  Samples samples_;
};

// Unbounded real-valued map (attention residuals, luminance, features).
using FloatMap = Raster<double>;
using FeatureMap = Raster<double>;
using LabelRaster = Raster<std::int32_t>;

template <typename Scalar>
bool all_finite(const Raster<Scalar>& r) {
  return r.samples().isFinite().all();
}

// Raster whose samples are all in [0, 1], 1 or 3 channels. Immutable once
// built; edit a copy of `raster()` and re-wrap to change pixels.
template <typename Scalar>
class BasicImage {
 public:
  using Samples = typename Raster<Scalar>::Samples;

  explicit BasicImage(Raster<Scalar> raster) : raster_(std::move(raster)) {
    if (raster_.channels() != 1 && raster_.channels() != 3) {
      throw ChannelCountError("image must have 1 or 3 channels, got " +
                              std::to_string(raster_.channels()));
    }
    const auto& s = raster_.samples();
    if (!(s.isFinite().all() && (s >= Scalar(0)).all() && (s <= Scalar(1)).all())) {
      throw ArgumentError("image samples must be finite and within [0, 1]");
    }
  }

  BasicImage(int height, int width, int channels, Samples samples)
      : BasicImage(Raster<Scalar>(height, width, channels, std::move(samples))) {}

  static BasicImage constant(int height, int width, int channels, Scalar value) {
    return BasicImage(Raster<Scalar>::constant(height, width, channels, value));
  }

  // Clamps into [0, 1] instead of rejecting.
  static BasicImage clamped(Raster<Scalar> raster) {
    raster.samples() = raster.samples().max(Scalar(0)).min(Scalar(1));
    return BasicImage(std::move(raster));
  }

  int height() const noexcept { return raster_.height(); }
  int width() const noexcept { return raster_.width(); }
  int channels() const noexcept { return raster_.channels(); }
  Eigen::Index pixel_count() const noexcept { return raster_.pixel_count(); }
  Scalar operator()(int row, int col, int ch = 0) const { return raster_(row, col, ch); }
  const Samples& samples() const noexcept { return raster_.samples(); }
  const Raster<Scalar>& raster() const noexcept { return raster_; }

  template <typename Other>
  bool same_shape(const Other& other) const noexcept {
    return height() == other.height() && width() == other.width() && channels() == other.channels();
  }

  friend bool operator==(const BasicImage& a, const BasicImage& b) { return a.raster_ == b.raster_; }

 private:
  Raster<Scalar> raster_;
};

using Image = BasicImage<double>;

}  // namespace dale
