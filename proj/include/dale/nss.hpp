#pragma once

#include <span>
#include <vector>

#include "dale/raster.hpp"

namespace dale {

// Natural-scene-statistics building blocks shared by NIQE and BRISQUE.

struct MscnParams {
  int window = 7;
  double sigma = 7.0 / 6.0;
  double stabilizer = 1.0;  // on the [0, 255] luminance scale

  void validate() const;
};

// Normalized Gaussian kernel, window x window, row-major.
std::vector<double> gaussian_window(const MscnParams& params);

struct MscnField {
  FloatMap coefficients;  // (I - mu) / (sigma + C)
  FloatMap local_sigma;
};

MscnField mscn_field(const FloatMap& luminance, const MscnParams& params = {});
FloatMap mscn(const FloatMap& luminance, const MscnParams& params = {});

struct GgdFit {
  double alpha;
  double sigma;
};

struct AggdFit {
  double alpha;
  double sigma_l;
  double sigma_r;
  double eta;
};

// Moment ratio r(g) = Gamma(2/g)^2 / (Gamma(1/g) Gamma(3/g)).
double ggd_moment_ratio(double shape);

// Nearest entry of the shape table over [0.2, 10] at step 0.001; ties go to
// the smaller shape.
double lookup_shape(double ratio);

GgdFit fit_ggd(std::span<const double> samples);
AggdFit fit_aggd(std::span<const double> samples);

enum class Orientation { horizontal, vertical, diagonal, antidiagonal };
inline constexpr Orientation kOrientations[4] = {Orientation::horizontal, Orientation::vertical,
                                                 Orientation::diagonal, Orientation::antidiagonal};

// Products of each coefficient with its neighbour in the given direction,
// restricted to the rectangle [top, top+height) x [left, left+width).
// Pairs that leave the rectangle are skipped.
std::vector<double> neighbour_products(const FloatMap& coefficients, Orientation orientation, int top, int left,
                                       int height, int width);

}  // namespace dale
