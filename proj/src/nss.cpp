#include "dale/nss.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace dale {
namespace {

constexpr int kShapeSteps = 9800;  // 0.2 .. 10.0 at 0.001
constexpr double kShapeMin = 0.2;

double shape_at(int i) { return (200 + i) / 1000.0; }

const std::vector<double>& ratio_table() {
  static const std::vector<double> table = [] {
    std::vector<double> t(kShapeSteps + 1);
    for (int i = 0; i <= kShapeSteps; ++i) t[static_cast<std::size_t>(i)] = ggd_moment_ratio(shape_at(i));
    return t;
  }();
  return table;
}

struct Moments {
  double mean_abs = 0.0;
  double mean_sq = 0.0;
};

Moments moments(std::span<const double> x) {
  Moments m;
  for (double v : x) {
    m.mean_abs += std::abs(v);
    m.mean_sq += v * v;
  }
  m.mean_abs /= double(x.size());
  m.mean_sq /= double(x.size());
  return m;
}

void check_samples(std::span<const double> x, const char* what) {
  if (x.size() < 16) throw FitError(std::string(what) + ": need at least 16 samples");
  for (double v : x) {
    if (!std::isfinite(v)) throw FitError(std::string(what) + ": non-finite sample");
  }
}

}  // namespace

void MscnParams::validate() const {
  if (window < 1 || window % 2 == 0) throw ArgumentError("MSCN window must be odd");
  if (!(sigma > 0.0)) throw ArgumentError("MSCN sigma must be positive");
  if (!(stabilizer > 0.0)) throw ArgumentError("MSCN stabilizer must be positive");
}

std::vector<double> gaussian_window(const MscnParams& params) {
  params.validate();
  const int half = params.window / 2;
  std::vector<double> w(static_cast<std::size_t>(params.window * params.window));
  double total = 0.0;
  for (int dy = -half; dy <= half; ++dy) {
    for (int dx = -half; dx <= half; ++dx) {
      const double v = std::exp(-(dx * dx + dy * dy) / (2.0 * params.sigma * params.sigma));
      w[static_cast<std::size_t>((dy + half) * params.window + dx + half)] = v;
      total += v;
    }
  }
  for (double& v : w) v /= total;
  return w;
}

MscnField mscn_field(const FloatMap& luminance, const MscnParams& params) {
  if (luminance.channels() != 1) throw ChannelCountError("MSCN needs a single-channel luminance map");
  const std::vector<double> kernel = gaussian_window(params);
  const int half = params.window / 2;
  const int h = luminance.height(), w = luminance.width();

  // Replicate-padded copy so the inner loops need no bounds checks.
  const int pw = w + 2 * half;
  std::vector<double> padded(static_cast<std::size_t>(h + 2 * half) * pw);
  for (int r = 0; r < h + 2 * half; ++r) {
    const int sr = std::clamp(r - half, 0, h - 1);
    for (int c = 0; c < pw; ++c) padded[static_cast<std::size_t>(r) * pw + c] = luminance(sr, std::clamp(c - half, 0, w - 1));
  }

  MscnField out{FloatMap(h, w, 1), FloatMap(h, w, 1)};
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      // Offsets from the centre sample keep flat neighbourhoods exactly zero.
      const double centre = luminance(r, c);
      double offset = 0.0;
      for (int dy = 0; dy < params.window; ++dy) {
        const double* row = padded.data() + static_cast<std::size_t>(r + dy) * pw + c;
        const double* k = kernel.data() + dy * params.window;
        for (int dx = 0; dx < params.window; ++dx) offset += k[dx] * (row[dx] - centre);
      }
      const double mu = centre + offset;
      // Weighted spread about the local mean: equal to E[I^2] - mu^2 without the cancellation.
      double var = 0.0;
      for (int dy = 0; dy < params.window; ++dy) {
        const double* row = padded.data() + static_cast<std::size_t>(r + dy) * pw + c;
        const double* k = kernel.data() + dy * params.window;
        for (int dx = 0; dx < params.window; ++dx) {
          const double d = row[dx] - mu;
          var += k[dx] * d * d;
        }
      }
      const double sigma = std::sqrt(var);
      out.local_sigma(r, c) = sigma;
      out.coefficients(r, c) = -offset / (sigma + params.stabilizer);
    }
  }
  return out;
}

FloatMap mscn(const FloatMap& luminance, const MscnParams& params) {
  return mscn_field(luminance, params).coefficients;
}

double ggd_moment_ratio(double shape) {
  return std::exp(2.0 * std::lgamma(2.0 / shape) - std::lgamma(1.0 / shape) - std::lgamma(3.0 / shape));
}

double lookup_shape(double ratio) {
  const auto& table = ratio_table();
  // The ratio is increasing in the shape parameter.
  const auto it = std::lower_bound(table.begin(), table.end(), ratio);
  if (it == table.begin()) return shape_at(0);
  if (it == table.end()) return shape_at(kShapeSteps);
  const auto hi = static_cast<int>(it - table.begin());
  const int lo = hi - 1;
  const double d_lo = std::abs(ratio - table[static_cast<std::size_t>(lo)]);
  const double d_hi = std::abs(*it - ratio);
  return d_hi < d_lo ? shape_at(hi) : shape_at(lo);
}

GgdFit fit_ggd(std::span<const double> samples) {
  check_samples(samples, "fit_ggd");
  const Moments m = moments(samples);
  if (!(m.mean_sq > 0.0)) throw FitError("fit_ggd: all samples are zero");
  return {lookup_shape(m.mean_abs * m.mean_abs / m.mean_sq), std::sqrt(m.mean_sq)};
}

AggdFit fit_aggd(std::span<const double> samples) {
  check_samples(samples, "fit_aggd");
  double left_sq = 0.0, right_sq = 0.0;
  std::size_t left_n = 0, right_n = 0;
  for (double v : samples) {
    if (v < 0.0) {
      left_sq += v * v;
      ++left_n;
    } else if (v > 0.0) {
      right_sq += v * v;
      ++right_n;
    }
  }
  if (left_n == 0 || right_n == 0) throw FitError("fit_aggd: samples must take both signs");
  const double sigma_l = std::sqrt(left_sq / double(left_n));
  const double sigma_r = std::sqrt(right_sq / double(right_n));
  const Moments m = moments(samples);
  const double g = sigma_l / sigma_r;
  const double r_hat = m.mean_abs * m.mean_abs / m.mean_sq;
  const double r_norm = r_hat * (g * g * g + 1.0) * (g + 1.0) / ((g * g + 1.0) * (g * g + 1.0));
  const double alpha = lookup_shape(r_norm);
  // Mean of the fitted distribution, with scales beta = sigma * sqrt(G(1/a) / G(3/a)).
  const double scale = std::exp(0.5 * (std::lgamma(1.0 / alpha) - std::lgamma(3.0 / alpha)));
  const double eta = (sigma_r - sigma_l) * scale * std::exp(std::lgamma(2.0 / alpha) - std::lgamma(1.0 / alpha));
  return {alpha, sigma_l, sigma_r, eta};
}

std::vector<double> neighbour_products(const FloatMap& coefficients, Orientation orientation, int top, int left,
                                       int height, int width) {
  int dy = 0, dx = 0;
  switch (orientation) {
    case Orientation::horizontal:
      dx = 1;
      break;
    case Orientation::vertical:
      dy = 1;
      break;
    case Orientation::diagonal:
      dy = 1;
      dx = 1;
      break;
    case Orientation::antidiagonal:
      dy = 1;
      dx = -1;
      break;
  }
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(height) * width);
  for (int r = top; r < top + height; ++r) {
    const int nr = r + dy;
    if (nr >= top + height) continue;
    for (int c = left; c < left + width; ++c) {
      const int nc = c + dx;
      if (nc < left || nc >= left + width) continue;
      out.push_back(coefficients(r, c) * coefficients(nr, nc));
    }
  }
  return out;
}

}  // namespace dale
