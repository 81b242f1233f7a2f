#pragma once

#include <Eigen/Dense>

#include <filesystem>
#include <string>
#include <vector>

#include "dale/nss.hpp"
#include "dale/raster.hpp"

namespace dale {

inline constexpr int kNssFeatureCount = 36;
inline constexpr int kNiqePatch = 96;
inline constexpr int kNiqeMinSide = 192;
inline constexpr double kNiqeSharpnessFraction = 0.75;

// Pristine-corpus multivariate Gaussian.
//
// File format: a line "niqe-model v1 dim=36", optional "#" comment lines,
// then 36 whitespace-separated mean values and 36 rows of 36 covariance
// values.
struct NiqeModel {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;

  void validate() const;
  static NiqeModel load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path, const std::vector<std::string>& comments = {}) const;
};

// One row of 36 features per selected 96x96 patch: for each of two scales,
// MSCN GGD (alpha, sigma^2) then, per orientation H, V, D1, D2, the AGGD
// (alpha, eta, sigma_l^2, sigma_r^2).
Eigen::MatrixXd niqe_patch_features(const Image& image, const MscnParams& params = {});

// Mean over the selected patches.
Eigen::VectorXd niqe_features(const Image& image, const MscnParams& params = {});

// Unbiased sample covariance of the rows; zero for a single row.
Eigen::MatrixXd feature_covariance(const Eigen::MatrixXd& rows);

// sqrt(d^T ((S1 + S2) / 2)^+ d), d = m1 - m2, with a pseudo-inverse for
// singular pooled covariances.
template <typename MeanA, typename MeanB, typename CovA, typename CovB>
double pooled_mahalanobis(const Eigen::MatrixBase<MeanA>& mean_a, const Eigen::MatrixBase<MeanB>& mean_b,
                          const Eigen::MatrixBase<CovA>& cov_a, const Eigen::MatrixBase<CovB>& cov_b) {
  const Eigen::Index n = mean_a.size();
  if (mean_b.size() != n || cov_a.rows() != n || cov_a.cols() != n || cov_b.rows() != n || cov_b.cols() != n) {
    throw DimensionMismatch("pooled_mahalanobis: inconsistent dimensions");
  }
  const Eigen::VectorXd d = (mean_a - mean_b).template cast<double>();
  if (d.isZero(0.0)) return 0.0;
  const Eigen::MatrixXd pooled = ((cov_a + cov_b) / 2.0).template cast<double>();
  const Eigen::MatrixXd inv = pooled.completeOrthogonalDecomposition().pseudoInverse();
  return std::sqrt(std::max(0.0, d.dot(inv * d)));
}

double niqe_score(const Eigen::VectorXd& features, const Eigen::MatrixXd& feature_cov, const NiqeModel& model);

// End-to-end score for one image.
double niqe(const Image& image, const NiqeModel& model, const MscnParams& params = {});

// Model from stacked patch features of a pristine corpus.
NiqeModel fit_niqe_model(const Eigen::MatrixXd& patch_features);

}  // namespace dale
