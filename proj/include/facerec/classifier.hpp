#ifndef FACEREC_CLASSIFIER_HPP
#define FACEREC_CLASSIFIER_HPP

#include "facerec/dataset.hpp"
#include "facerec/eigenspace.hpp"
#include "facerec/features.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <span>
#include <string>
#include <vector>

namespace facerec {

template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar euclidean_distance(const Eigen::MatrixBase<DerivedA> &a,
                                             const Eigen::MatrixBase<DerivedB> &b) {
  if (a.size() != b.size())
    throw Error(Errc::DimensionMismatch, "vectors of length " +
                                             std::to_string(a.size()) + " and " +
                                             std::to_string(b.size()));
  return std::sqrt((a - b).squaredNorm());
}

struct ClassifierRule {
  enum class Kind { KNN, Centroid };
  Kind kind = Kind::KNN;
  int k = 1;

  static ClassifierRule knn(int k) { return {Kind::KNN, k}; }
  static ClassifierRule centroid() { return {Kind::Centroid, 0}; }

  /// "knn<k>" or "centroid".
  std::string name() const;
  /// Inverse of name(); throws InvalidSpec.
  static ClassifierRule parse(std::string_view text);

  bool operator==(const ClassifierRule &) const = default;
};

struct Neighbor {
  int index = 0; ///< position in the training set
  int label = 0;
  double distance = 0.0;
};

struct Prediction {
  int label = 0;
  std::vector<Neighbor> neighbors; ///< ascending distance; empty for centroid
};

/// Relative slack under which two summed neighbor distances count as equal.
inline constexpr double kDistanceSumTolerance = 1e-12;

/// Majority vote over the k nearest columns of `points`. Candidates are
/// ordered by (distance, training index). A vote tie goes to the tied class
/// with the smaller summed neighbor distance, then to the lower class index.
Prediction knn_classify(const Eigen::MatrixXd &points, std::span<const int> labels,
                        int num_classes, const Eigen::VectorXd &query, int k);

/// Per-class mean of `points` columns; column c is class c. Throws
/// EmptyClass naming any class without points.
Eigen::MatrixXd fit_centroids(const Eigen::MatrixXd &points, std::span<const int> labels,
                              const std::vector<std::string> &class_names);

/// Index of the nearest centroid column, lowest index on ties.
int centroid_classify(const Eigen::MatrixXd &centroids, const Eigen::VectorXd &query);

struct TrainedModel {
  FeatureConfig features;
  std::vector<std::string> class_names;
  Eigenspace eigenspace;
  Eigen::MatrixXd train_coords; ///< one projected training sample per column
  std::vector<int> train_labels;
  Eigen::MatrixXd centroids; ///< one class per column

  int num_classes() const { return static_cast<int>(class_names.size()); }
  int train_count() const { return static_cast<int>(train_labels.size()); }
};

/// PCA + projection + centroids from already-extracted feature vectors.
TrainedModel train_from_features(const std::vector<FeatureVector> &features,
                                 std::vector<int> labels,
                                 std::vector<std::string> class_names,
                                 const FeatureConfig &config,
                                 const PcaOptions &pca = {});

/// Trains on every sample of `train`; split tags are ignored.
TrainedModel train_model(const LabeledDataset &train, const FeatureConfig &config,
                         const PcaOptions &pca = {});

Prediction knn_classify(const TrainedModel &model, const Eigen::VectorXd &query, int k);
int centroid_classify(const TrainedModel &model, const Eigen::VectorXd &query);

/// Applies `rule` to already-projected coordinates.
Prediction predict(const TrainedModel &model, const Eigen::VectorXd &coords,
                   const ClassifierRule &rule);

/// Features -> projection -> rule.
Prediction classify(const TrainedModel &model, const GrayImage &image,
                    const ClassifierRule &rule);

/// classify() over a list, split across `jobs` threads; output keeps input
/// order.
std::vector<int> classify_batch(const TrainedModel &model,
                                const std::vector<GrayImage> &images,
                                const ClassifierRule &rule, int jobs = 1);

} // namespace facerec

#endif // FACEREC_CLASSIFIER_HPP
