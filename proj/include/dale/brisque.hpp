#pragma once

#include <Eigen/Core>

#include "dale/nss.hpp"
#include "dale/raster.hpp"

namespace dale {

inline constexpr int kBrisqueMinSide = 64;

// Whole-image NSS features at full and half resolution. Per scale: MSCN GGD
// (alpha, sigma^2), then for H, V, D1, D2 products (eta, alpha, sigma_l^2,
// sigma_r^2). Scoring needs an externally trained regressor.
Eigen::VectorXd brisque_features(const Image& image, const MscnParams& params = {});

}  // namespace dale
