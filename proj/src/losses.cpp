#include "dale/losses.hpp"

namespace dale {
namespace {

void require_same_shape(const Raster<double>& a, const Raster<double>& b, const char* what) {
  if (!a.same_shape(b)) {
    throw DimensionMismatch(std::string(what) + ": shapes " + a.shape_string() + " and " + b.shape_string() +
                            " differ");
  }
}

}  // namespace

double l2_loss(const Raster<double>& a, const Raster<double>& b) {
  require_same_shape(a, b, "l2_loss");
  return (a.samples() - b.samples()).square().mean();
}

double l1_feature_loss(const FeatureMap& a, const FeatureMap& b) {
  require_same_shape(a, b, "l1_feature_loss");
  if (!all_finite(a) || !all_finite(b)) throw ArgumentError("feature maps must be finite");
  return (a.samples() - b.samples()).abs().mean();
}

double tv_loss(const Raster<double>& image) {
  const int h = image.height(), w = image.width(), ch = image.channels();
  double sum = 0.0;
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      for (int k = 0; k < ch; ++k) {
        const double v = image(r, c, k);
        const double dx = c + 1 < w ? image(r, c + 1, k) - v : 0.0;
        const double dy = r + 1 < h ? image(r + 1, c, k) - v : 0.0;
        sum += dx * dx + dy * dy;
      }
    }
  }
  return sum / static_cast<double>(image.size());
}

double van_total_loss(double attention_term, double perceptual_term, const VanLossWeights& w) {
  return w.attention * attention_term + w.perceptual * perceptual_term;
}

double en_total_loss(double pixel_term, double perceptual_term, double tv_term, const EnLossWeights& w) {
  return w.pixel * pixel_term + w.perceptual * perceptual_term + w.smoothness * tv_term;
}

}  // namespace dale
