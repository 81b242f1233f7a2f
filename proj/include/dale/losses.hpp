#pragma once

#include "dale/raster.hpp"

namespace dale {

struct VanLossWeights {
  double attention = 0.5;   // lambda_1, pixel term
  double perceptual = 1.0;  // lambda_2
};

struct EnLossWeights {
  double pixel = 1.0;       // lambda_1
  double perceptual = 5.0;  // lambda_2
  double smoothness = 1.0;  // lambda_3
};

// Mean squared difference over every sample. Shapes must match.
double l2_loss(const Raster<double>& a, const Raster<double>& b);
inline double l2_loss(const Image& a, const Image& b) { return l2_loss(a.raster(), b.raster()); }

// Mean absolute difference between two feature maps.
double l1_feature_loss(const FeatureMap& a, const FeatureMap& b);

// (1 / CHW) * sum(dx^2 + dy^2) with forward differences; the last column
// and row contribute zero.
double tv_loss(const Raster<double>& image);
inline double tv_loss(const Image& image) { return tv_loss(image.raster()); }

double van_total_loss(double attention_term, double perceptual_term, const VanLossWeights& w = {});
double en_total_loss(double pixel_term, double perceptual_term, double tv_term, const EnLossWeights& w = {});

}  // namespace dale
