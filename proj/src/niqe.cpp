#include "dale/niqe.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include "dale/color.hpp"
#include "dale/resample.hpp"

namespace dale {
namespace {

constexpr const char* kModelHeader = "niqe-model v1 dim=36";

// 18 features for one patch of one scale.
void patch_features(const FloatMap& coeffs, int top, int left, int size, double* out) {
  std::vector<double> samples;
  samples.reserve(static_cast<std::size_t>(size) * size);
  for (int r = top; r < top + size; ++r) {
    for (int c = left; c < left + size; ++c) samples.push_back(coeffs(r, c));
  }
  const GgdFit g = fit_ggd(samples);
  out[0] = g.alpha;
  out[1] = g.sigma * g.sigma;
  int k = 2;
  for (Orientation o : kOrientations) {
    const AggdFit a = fit_aggd(neighbour_products(coeffs, o, top, left, size, size));
    out[k++] = a.alpha;
    out[k++] = a.eta;
    out[k++] = a.sigma_l * a.sigma_l;
    out[k++] = a.sigma_r * a.sigma_r;
  }
}

}  // namespace

void NiqeModel::validate() const {
  if (mean.size() != kNssFeatureCount || covariance.rows() != kNssFeatureCount ||
      covariance.cols() != kNssFeatureCount) {
    throw DimensionMismatch("NIQE model must be 36-dimensional");
  }
  if (!mean.allFinite() || !covariance.allFinite()) throw FormatError("NIQE model has non-finite entries");
  if ((covariance - covariance.transpose()).cwiseAbs().maxCoeff() > 1e-9) {
    throw FormatError("NIQE model covariance is not symmetric");
  }
}

NiqeModel NiqeModel::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open NIQE model " + path.string());
  std::string line;
  std::getline(in, line);
  if (line != kModelHeader) throw FormatError("NIQE model header must be '" + std::string(kModelHeader) + "'", 0);
  std::stringstream body;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] == '#') continue;
    body << line << '\n';
  }
  NiqeModel model{Eigen::VectorXd(kNssFeatureCount), Eigen::MatrixXd(kNssFeatureCount, kNssFeatureCount)};
  for (int i = 0; i < kNssFeatureCount; ++i) {
    if (!(body >> model.mean[i])) throw FormatError("NIQE model truncated in mean vector");
  }
  for (int r = 0; r < kNssFeatureCount; ++r) {
    for (int c = 0; c < kNssFeatureCount; ++c) {
      if (!(body >> model.covariance(r, c))) throw FormatError("NIQE model truncated in covariance");
    }
  }
  std::string extra;
  if (body >> extra) throw FormatError("NIQE model has trailing data");
  model.validate();
  return model;
}

void NiqeModel::save(const std::filesystem::path& path, const std::vector<std::string>& comments) const {
  validate();
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write NIQE model " + path.string());
  out << kModelHeader << '\n';
  for (const auto& c : comments) out << "# " << c << '\n';
  out << std::setprecision(17);
  for (int i = 0; i < kNssFeatureCount; ++i) out << (i ? " " : "") << mean[i];
  out << '\n';
  for (int r = 0; r < kNssFeatureCount; ++r) {
    for (int c = 0; c < kNssFeatureCount; ++c) out << (c ? " " : "") << covariance(r, c);
    out << '\n';
  }
}

Eigen::MatrixXd niqe_patch_features(const Image& image, const MscnParams& params) {
  if (std::min(image.height(), image.width()) < kNiqeMinSide) {
    throw ArgumentError("NIQE needs images with a shorter side of at least " + std::to_string(kNiqeMinSide));
  }
  const int rows = image.height() / kNiqePatch, cols = image.width() / kNiqePatch;
  const FloatMap lum = crop(luminance_255(image), 0, 0, rows * kNiqePatch, cols * kNiqePatch);
  const MscnField fine = mscn_field(lum, params);
  const FloatMap coarse = mscn(downsample_box2(lum), params);

  // Sharpness: mean local sigma of each patch at full resolution.
  std::vector<double> sharpness(static_cast<std::size_t>(rows) * cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      double s = 0.0;
      for (int r = i * kNiqePatch; r < (i + 1) * kNiqePatch; ++r) {
        for (int c = j * kNiqePatch; c < (j + 1) * kNiqePatch; ++c) s += fine.local_sigma(r, c);
      }
      sharpness[static_cast<std::size_t>(i) * cols + j] = s / (kNiqePatch * kNiqePatch);
    }
  }
  const double threshold = kNiqeSharpnessFraction * *std::max_element(sharpness.begin(), sharpness.end());

  std::vector<Eigen::Matrix<double, 1, kNssFeatureCount>> kept;
  constexpr int half = kNiqePatch / 2;
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      const double s = sharpness[static_cast<std::size_t>(i) * cols + j];
      if (!(s > 0.0) || s < threshold) continue;
      Eigen::Matrix<double, 1, kNssFeatureCount> row;
      try {
        patch_features(fine.coefficients, i * kNiqePatch, j * kNiqePatch, kNiqePatch, row.data());
        patch_features(coarse, i * half, j * half, half, row.data() + kNssFeatureCount / 2);
      } catch (const FitError&) {
        continue;
      }
      kept.push_back(row);
    }
  }
  if (kept.empty()) throw FitError("NIQE: no patch with usable statistics");
  Eigen::MatrixXd out(static_cast<Eigen::Index>(kept.size()), kNssFeatureCount);
  for (std::size_t i = 0; i < kept.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = kept[i];
  return out;
}

Eigen::VectorXd niqe_features(const Image& image, const MscnParams& params) {
  return niqe_patch_features(image, params).colwise().mean().transpose();
}

Eigen::MatrixXd feature_covariance(const Eigen::MatrixXd& rows) {
  const Eigen::Index n = rows.rows();
  if (n < 2) return Eigen::MatrixXd::Zero(rows.cols(), rows.cols());
  const Eigen::MatrixXd centered = rows.rowwise() - rows.colwise().mean();
  Eigen::MatrixXd cov = (centered.transpose() * centered) / double(n - 1);
  return (cov + cov.transpose()) / 2.0;
}

double niqe_score(const Eigen::VectorXd& features, const Eigen::MatrixXd& feature_cov, const NiqeModel& model) {
  return pooled_mahalanobis(model.mean, features, model.covariance, feature_cov);
}

double niqe(const Image& image, const NiqeModel& model, const MscnParams& params) {
  const Eigen::MatrixXd rows = niqe_patch_features(image, params);
  return niqe_score(rows.colwise().mean().transpose(), feature_covariance(rows), model);
}

NiqeModel fit_niqe_model(const Eigen::MatrixXd& patch_features) {
  if (patch_features.cols() != kNssFeatureCount || patch_features.rows() < 2) {
    throw ArgumentError("NIQE model fit needs at least two 36-feature rows");
  }
  NiqeModel model{patch_features.colwise().mean().transpose(), feature_covariance(patch_features)};
  model.validate();
  return model;
}

}  // namespace dale
