#include "dale/brisque.hpp"

#include <string>

#include "dale/color.hpp"
#include "dale/niqe.hpp"
#include "dale/resample.hpp"

namespace dale {

Eigen::VectorXd brisque_features(const Image& image, const MscnParams& params) {
  if (std::min(image.height(), image.width()) < kBrisqueMinSide) {
    throw ArgumentError("BRISQUE features need a shorter side of at least " + std::to_string(kBrisqueMinSide));
  }
  Eigen::VectorXd out(kNssFeatureCount);
  FloatMap lum = luminance_255(image);
  int k = 0;
  for (int scale = 0; scale < 2; ++scale) {
    if (scale == 1) lum = downsample_box2(lum);
    const FloatMap coeffs = mscn(lum, params);
    const auto n = static_cast<std::size_t>(coeffs.size());
    const GgdFit g = fit_ggd({coeffs.samples().data(), n});
    out[k++] = g.alpha;
    out[k++] = g.sigma * g.sigma;
    for (Orientation o : kOrientations) {
      const AggdFit a = fit_aggd(neighbour_products(coeffs, o, 0, 0, coeffs.height(), coeffs.width()));
      out[k++] = a.eta;
      out[k++] = a.alpha;
      out[k++] = a.sigma_l * a.sigma_l;
      out[k++] = a.sigma_r * a.sigma_r;
    }
  }
  return out;
}

}  // namespace dale
