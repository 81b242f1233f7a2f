#include "dale/color.hpp"

#include <algorithm>
#include <cmath>

namespace dale {
namespace {

// sRGB primaries, D65.
constexpr double kRgbToXyz[3][3] = {
    {0.4124564, 0.3575761, 0.1804375},
    {0.2126729, 0.7151522, 0.0721750},
    {0.0193339, 0.1191920, 0.9503041},
};

// Reference white is the image of RGB (1,1,1) so that white maps to a*=b*=0.
constexpr double kWhite[3] = {
    kRgbToXyz[0][0] + kRgbToXyz[0][1] + kRgbToXyz[0][2],
    kRgbToXyz[1][0] + kRgbToXyz[1][1] + kRgbToXyz[1][2],
    kRgbToXyz[2][0] + kRgbToXyz[2][1] + kRgbToXyz[2][2],
};

double srgb_to_linear(double c) {
  return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

double lab_f(double t) {
  constexpr double delta = 6.0 / 29.0;
  return t > delta * delta * delta ? std::cbrt(t) : t / (3.0 * delta * delta) + 4.0 / 29.0;
}

}  // namespace

LabImage::LabImage(Raster<double> lab) : lab_(std::move(lab)) {
  if (lab_.channels() != 3) throw ChannelCountError("Lab image needs 3 channels");
}

LabImage rgb_to_lab(const Image& image) {
  if (image.channels() != 3) {
    throw ChannelCountError("rgb_to_lab needs a 3-channel image");
  }
  Raster<double> lab(image.height(), image.width(), 3);
  for (int r = 0; r < image.height(); ++r) {
    for (int c = 0; c < image.width(); ++c) {
      double lin[3];
      for (int k = 0; k < 3; ++k) lin[k] = srgb_to_linear(image(r, c, k));
      double f[3];
      for (int i = 0; i < 3; ++i) {
        const double xyz = kRgbToXyz[i][0] * lin[0] + kRgbToXyz[i][1] * lin[1] + kRgbToXyz[i][2] * lin[2];
        f[i] = lab_f(xyz / kWhite[i]);
      }
      lab(r, c, 0) = std::clamp(116.0 * f[1] - 16.0, 0.0, 100.0);
      lab(r, c, 1) = 500.0 * (f[0] - f[1]);
      lab(r, c, 2) = 200.0 * (f[1] - f[2]);
    }
  }
  return LabImage(std::move(lab));
}

FloatMap lightness(const Image& image) {
  if (image.channels() == 1) return image.raster();
  const auto& src = image.raster();
  FloatMap out(image.height(), image.width(), 1);
  out.samples() = src.channel(0).max(src.channel(1)).max(src.channel(2));
  return out;
}

FloatMap luminance_255(const Image& image) {
  const auto& src = image.raster();
  FloatMap out(image.height(), image.width(), 1);
  if (image.channels() == 1) {
    out.samples() = src.samples() * 255.0;
  } else {
    out.samples() = (0.299 * src.channel(0) + 0.587 * src.channel(1) + 0.114 * src.channel(2)) * 255.0;
  }
  return out;
}

}  // namespace dale
