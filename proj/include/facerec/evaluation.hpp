#ifndef FACEREC_EVALUATION_HPP
#define FACEREC_EVALUATION_HPP

#include "facerec/classifier.hpp"
#include "facerec/dataset.hpp"

#include <Eigen/Dense>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace facerec {

/// counts(t, p): samples of true class t predicted as p.
struct ConfusionMatrix {
  Eigen::Matrix<long, Eigen::Dynamic, Eigen::Dynamic> counts;
  std::vector<std::string> class_names;

  long total() const { return counts.sum(); }
  long correct() const { return counts.trace(); }
  bool operator==(const ConfusionMatrix &o) const {
    return class_names == o.class_names && counts.rows() == o.counts.rows() &&
           counts.cols() == o.counts.cols() && counts == o.counts;
  }
};

/// Fraction of positions where predicted and truth agree.
double recognition_rate(std::span<const int> predicted, std::span<const int> truth);

ConfusionMatrix confusion_matrix(std::span<const int> predicted, std::span<const int> truth,
                                 const std::vector<std::string> &class_names);

/// trace / total
double rate_from_confusion(const ConfusionMatrix &cm);

struct Evaluation {
  double rate = 0.0;
  ConfusionMatrix confusion;
};

/// Classifies every sample of `test`. Test labels are matched to the model's
/// classes by name.
Evaluation evaluate(const TrainedModel &model, const LabeledDataset &test,
                    const ClassifierRule &rule, int jobs = 1);

struct SweepOptions {
  int jobs = 1;
  PcaOptions pca;
  bool keep_confusions = false;
};

/// Recognition rates over (coefficient count, rule). For raw-pixel sweeps
/// coeff_counts holds the single full feature dimension.
struct SweepResult {
  FeatureKind kind = FeatureKind::DCT;
  std::vector<int> coeff_counts;
  std::vector<ClassifierRule> rules;
  Eigen::MatrixXd rates; ///< coeff_counts.size() x rules.size()
  /// Row-major by (coefficient count, rule) when requested, else empty.
  std::vector<ConfusionMatrix> confusions;

  const ConfusionMatrix &confusion(std::size_t row, std::size_t col) const {
    return confusions.at(row * rules.size() + col);
  }
};

/// knn<k> for each k in order, then centroid if requested.
std::vector<ClassifierRule> make_rules(const std::vector<int> &k_values,
                                       bool include_centroid);

/// For each coefficient count: zigzag DCT features, PCA refit, centroids,
/// and every rule evaluated on `test`. Cells run in parallel across
/// `options.jobs` threads; the result does not depend on the thread count.
SweepResult sweep_dct(const LabeledDataset &train, const LabeledDataset &test,
                      const std::vector<int> &coeff_counts,
                      const std::vector<int> &k_values, bool include_centroid,
                      const SweepOptions &options = {});

/// One PCA over full raw-pixel vectors, every rule evaluated on `test`.
SweepResult sweep_raw(const LabeledDataset &train, const LabeledDataset &test,
                      const std::vector<int> &k_values, bool include_centroid,
                      const SweepOptions &options = {});

/// Six decimal digits.
std::string format_rate(double rate);

/// `n_coeffs,rule,rate` header, one row per cell in (coefficient, rule) order.
void write_sweep_csv(const SweepResult &result, std::ostream &out);

/// Header row `truth,<predicted names...>`, then one row per true class.
void write_confusion_csv(const ConfusionMatrix &cm, std::ostream &out);

} // namespace facerec

#endif // FACEREC_EVALUATION_HPP
