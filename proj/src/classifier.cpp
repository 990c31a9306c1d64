#include "facerec/classifier.hpp"

#include "parallel.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>

namespace facerec {

std::string ClassifierRule::name() const {
  return kind == Kind::Centroid ? "centroid" : "knn" + std::to_string(k);
}

ClassifierRule ClassifierRule::parse(std::string_view text) {
  if (text == "centroid")
    return centroid();
  if (text.starts_with("knn")) {
    const std::string_view digits = text.substr(3);
    int k = 0;
    const auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), k);
    if (ec == std::errc() && end == digits.data() + digits.size() && k >= 1)
      return knn(k);
  }
  throw Error(Errc::InvalidSpec,
              "unknown rule '" + std::string(text) + "' (expected knn<k> or centroid)");
}

Prediction knn_classify(const Eigen::MatrixXd &points, std::span<const int> labels,
                        int num_classes, const Eigen::VectorXd &query, int k) {
  const auto m = static_cast<int>(points.cols());
  if (m == 0)
    throw Error(Errc::EmptyModel, "no training points");
  if (static_cast<int>(labels.size()) != m)
    throw Error(Errc::LengthMismatch, "labels and points differ in count");
  if (k < 1 || k > m)
    throw Error(Errc::KOutOfRange,
                "k = " + std::to_string(k) + " not in [1, " + std::to_string(m) + "]");
  if (points.rows() != query.size())
    throw Error(Errc::DimensionMismatch, "query length " + std::to_string(query.size()) +
                                             ", points have " +
                                             std::to_string(points.rows()));

  const Eigen::VectorXd sq = (points.colwise() - query).colwise().squaredNorm().transpose();
  std::vector<int> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), 0);
  auto closer = [&](int a, int b) { return sq(a) < sq(b) || (sq(a) == sq(b) && a < b); };
  std::partial_sort(order.begin(), order.begin() + k, order.end(), closer);

  Prediction out;
  out.neighbors.reserve(static_cast<std::size_t>(k));
  std::vector<int> votes(static_cast<std::size_t>(num_classes), 0);
  std::vector<double> distance_sum(static_cast<std::size_t>(num_classes), 0.0);
  for (int i = 0; i < k; ++i) {
    const int idx = order[static_cast<std::size_t>(i)];
    const int label = labels[static_cast<std::size_t>(idx)];
    if (label < 0 || label >= num_classes)
      throw Error(Errc::UnknownLabel, "training label " + std::to_string(label));
    const double d = std::sqrt(sq(idx));
    out.neighbors.push_back({idx, label, d});
    ++votes[static_cast<std::size_t>(label)];
    distance_sum[static_cast<std::size_t>(label)] += d;
  }

  int best = -1;
  for (int c = 0; c < num_classes; ++c) {
    const auto cu = static_cast<std::size_t>(c);
    if (votes[cu] == 0)
      continue;
    if (best < 0) {
      best = c;
      continue;
    }
    const auto bu = static_cast<std::size_t>(best);
    const double slack = kDistanceSumTolerance * std::max(distance_sum[cu], distance_sum[bu]);
    if (votes[cu] > votes[bu] ||
        (votes[cu] == votes[bu] && distance_sum[cu] < distance_sum[bu] - slack))
      best = c;
  }
  out.label = best;
  return out;
}

Eigen::MatrixXd fit_centroids(const Eigen::MatrixXd &points, std::span<const int> labels,
                              const std::vector<std::string> &class_names) {
  if (static_cast<Eigen::Index>(labels.size()) != points.cols())
    throw Error(Errc::LengthMismatch, "labels and points differ in count");
  const auto n_classes = static_cast<Eigen::Index>(class_names.size());
  Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(points.rows(), n_classes);
  std::vector<int> counts(class_names.size(), 0);
  for (Eigen::Index i = 0; i < points.cols(); ++i) {
    const int label = labels[static_cast<std::size_t>(i)];
    if (label < 0 || label >= n_classes)
      throw Error(Errc::UnknownLabel, "label " + std::to_string(label));
    sums.col(label) += points.col(i);
    ++counts[static_cast<std::size_t>(label)];
  }
  for (Eigen::Index c = 0; c < n_classes; ++c) {
    if (counts[static_cast<std::size_t>(c)] == 0)
      throw Error(Errc::EmptyClass, "class '" + class_names[static_cast<std::size_t>(c)] +
                                        "' has no training samples");
    sums.col(c) /= static_cast<double>(counts[static_cast<std::size_t>(c)]);
  }
  return sums;
}

int centroid_classify(const Eigen::MatrixXd &centroids, const Eigen::VectorXd &query) {
  if (centroids.cols() == 0)
    throw Error(Errc::EmptyModel, "no centroids");
  if (centroids.rows() != query.size())
    throw Error(Errc::DimensionMismatch, "query length " + std::to_string(query.size()) +
                                             ", centroids have " +
                                             std::to_string(centroids.rows()));
  int best = 0;
  double best_sq = (centroids.col(0) - query).squaredNorm();
  for (Eigen::Index c = 1; c < centroids.cols(); ++c) {
    const double d = (centroids.col(c) - query).squaredNorm();
    if (d < best_sq) {
      best_sq = d;
      best = static_cast<int>(c);
    }
  }
  return best;
}

TrainedModel train_from_features(const std::vector<FeatureVector> &features,
                                 std::vector<int> labels,
                                 std::vector<std::string> class_names,
                                 const FeatureConfig &config, const PcaOptions &pca) {
  config.validate();
  if (features.size() != labels.size())
    throw Error(Errc::LengthMismatch, "features and labels differ in count");
  if (features.empty())
    throw Error(Errc::EmptyInput, "no training samples");
  for (const FeatureVector &f : features)
    if (f.values.size() != config.dimension())
      throw Error(Errc::DimensionMismatch,
                  "feature length " + std::to_string(f.values.size()) +
                      ", configuration expects " + std::to_string(config.dimension()));

  TrainedModel model;
  model.features = config;
  model.class_names = std::move(class_names);
  model.train_labels = std::move(labels);
  model.eigenspace = fit_pca(features, pca);
  model.train_coords.resize(model.eigenspace.size(),
                            static_cast<Eigen::Index>(features.size()));
  for (std::size_t i = 0; i < features.size(); ++i)
    model.train_coords.col(static_cast<Eigen::Index>(i)) =
        project(model.eigenspace, features[i]);
  model.centroids = fit_centroids(model.train_coords, model.train_labels,
                                  model.class_names);
  return model;
}

TrainedModel train_model(const LabeledDataset &train, const FeatureConfig &config,
                         const PcaOptions &pca) {
  train.validate();
  std::vector<FeatureVector> features;
  std::vector<int> labels;
  features.reserve(train.samples.size());
  for (std::size_t i = 0; i < train.samples.size(); ++i) {
    try {
      features.push_back(extract_features(train.samples[i].image, config));
    } catch (const Error &e) {
      rethrow_with_context(e, "training sample " + std::to_string(i));
    }
    labels.push_back(train.samples[i].class_id);
  }
  return train_from_features(features, std::move(labels), train.class_names, config, pca);
}

Prediction knn_classify(const TrainedModel &model, const Eigen::VectorXd &query, int k) {
  return knn_classify(model.train_coords, model.train_labels, model.num_classes(), query, k);
}

int centroid_classify(const TrainedModel &model, const Eigen::VectorXd &query) {
  return centroid_classify(model.centroids, query);
}

Prediction predict(const TrainedModel &model, const Eigen::VectorXd &coords,
                   const ClassifierRule &rule) {
  if (rule.kind == ClassifierRule::Kind::Centroid)
    return {centroid_classify(model, coords), {}};
  return knn_classify(model, coords, rule.k);
}

Prediction classify(const TrainedModel &model, const GrayImage &image,
                    const ClassifierRule &rule) {
  const FeatureVector f = extract_features(image, model.features);
  return predict(model, project(model.eigenspace, f), rule);
}

std::vector<int> classify_batch(const TrainedModel &model,
                                const std::vector<GrayImage> &images,
                                const ClassifierRule &rule, int jobs) {
  std::vector<int> out(images.size());
  detail::parallel_for(images.size(), jobs, [&](std::size_t i) {
    try {
      out[i] = classify(model, images[i], rule).label;
    } catch (const Error &e) {
      rethrow_with_context(e, "sample " + std::to_string(i));
    }
  });
  return out;
}

} // namespace facerec
