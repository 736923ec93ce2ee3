#pragma once

#include <string>
#include <vector>

#include "stylo/features.hpp"
#include "stylo/matrix.hpp"

namespace stylo::projection {

enum class Kind { pca, lda };

const char* to_string(Kind k);

struct Model {
  Kind kind = Kind::pca;
  /// k rows of unit feature-space directions. Each row's largest-magnitude
  /// coordinate is positive.
  Matrix components;
  std::vector<double> means;  // centering
  std::vector<std::string> feature_names;
  // pca
  std::vector<double> eigenvalues;
  std::vector<double> explained_variance_ratio;
  // lda
  std::vector<std::string> class_labels;  // sorted
  Matrix class_means;                     // projected, one row per class
  double regularization = 0.0;            // lambda added to the within scatter

  std::size_t dim() const { return means.size(); }
  std::size_t k() const { return components.rows(); }
};

/// Top-k principal directions of the centered data; requires
/// 1 <= k <= min(samples - 1, features). Uses the n x n Gram matrix when
/// features outnumber samples.
Model fit_pca(const Matrix& x, std::size_t k);
Model fit_pca(const features::FeatureMatrix& m, std::size_t k);

/// Fisher discriminant directions with the within scatter regularized by
/// lambda = 1e-6 * trace / dim. k = 0 means classes - 1.
Model fit_lda(const Matrix& x, const std::vector<std::string>& labels, std::size_t k = 0);
Model fit_lda(const features::FeatureMatrix& m, const std::vector<std::string>& labels, std::size_t k = 0);

struct ProjectedPoints {
  std::vector<std::string> sample_ids;
  Matrix coordinates;  // n x k
  std::vector<std::string> labels;
};

Matrix transform(const Model& model, const Matrix& x);
ProjectedPoints transform(const Model& model, const features::FeatureMatrix& m,
                          const std::vector<std::string>& labels = {});
/// Maps coordinates back to feature space (exact for a full basis).
Matrix inverse_transform(const Model& model, const Matrix& coordinates);

/// LDA only: nearest projected class mean, ties to the smallest label.
std::vector<std::string> predict(const Model& model, const Matrix& x);

std::string to_csv(const ProjectedPoints& p);
std::string to_json(const Model& model);

}  // namespace stylo::projection
