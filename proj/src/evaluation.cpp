#include "facerec/evaluation.hpp"

#include "parallel.hpp"

#include <algorithm>
#include <cstdio>
#include <unordered_map>

namespace facerec {

namespace {

void require_parallel(std::span<const int> predicted, std::span<const int> truth) {
  if (predicted.size() != truth.size())
    throw Error(Errc::LengthMismatch, std::to_string(predicted.size()) +
                                          " predictions vs " +
                                          std::to_string(truth.size()) + " labels");
  if (truth.empty())
    throw Error(Errc::EmptyInput, "no predictions to score");
}

std::string csv_field(const std::string &s) {
  if (s.find_first_of(",\"\n") == std::string::npos)
    return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"')
      out += '"';
    out += c;
  }
  return out + '"';
}

} // namespace

double recognition_rate(std::span<const int> predicted, std::span<const int> truth) {
  require_parallel(predicted, truth);
  long correct = 0;
  for (std::size_t i = 0; i < truth.size(); ++i)
    correct += predicted[i] == truth[i] ? 1 : 0;
  return static_cast<double>(correct) / static_cast<double>(truth.size());
}

ConfusionMatrix confusion_matrix(std::span<const int> predicted, std::span<const int> truth,
                                 const std::vector<std::string> &class_names) {
  require_parallel(predicted, truth);
  const auto c = static_cast<int>(class_names.size());
  ConfusionMatrix cm;
  cm.class_names = class_names;
  cm.counts = Eigen::Matrix<long, Eigen::Dynamic, Eigen::Dynamic>::Zero(c, c);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const int t = truth[i];
    const int p = predicted[i];
    if (t < 0 || t >= c || p < 0 || p >= c)
      throw Error(Errc::UnknownLabel, "sample " + std::to_string(i) + " has label outside [0, " +
                                          std::to_string(c) + ")");
    ++cm.counts(t, p);
  }
  return cm;
}

double rate_from_confusion(const ConfusionMatrix &cm) {
  const long total = cm.total();
  if (total < 1)
    throw Error(Errc::EmptyMatrix, "confusion matrix has no counts");
  return static_cast<double>(cm.correct()) / static_cast<double>(total);
}

Evaluation evaluate(const TrainedModel &model, const LabeledDataset &test,
                    const ClassifierRule &rule, int jobs) {
  if (test.samples.empty())
    throw Error(Errc::EmptyInput, "test set is empty");

  std::unordered_map<std::string, int> model_ids;
  for (int c = 0; c < model.num_classes(); ++c)
    model_ids.emplace(model.class_names[static_cast<std::size_t>(c)], c);

  std::vector<GrayImage> images;
  std::vector<int> truth;
  images.reserve(test.samples.size());
  truth.reserve(test.samples.size());
  for (std::size_t i = 0; i < test.samples.size(); ++i) {
    const Sample &s = test.samples[i];
    const std::string &name = test.class_names.at(static_cast<std::size_t>(s.class_id));
    const auto it = model_ids.find(name);
    if (it == model_ids.end())
      throw Error(Errc::UnknownLabel,
                  "test sample " + std::to_string(i) + " has label '" + name +
                      "' unknown to the model");
    images.push_back(s.image);
    truth.push_back(it->second);
  }

  const std::vector<int> predicted = classify_batch(model, images, rule, jobs);
  Evaluation out;
  out.confusion = confusion_matrix(predicted, truth, model.class_names);
  out.rate = rate_from_confusion(out.confusion);
  return out;
}

std::vector<ClassifierRule> make_rules(const std::vector<int> &k_values,
                                       bool include_centroid) {
  std::vector<ClassifierRule> rules;
  for (int k : k_values) {
    if (k < 1)
      throw Error(Errc::KOutOfRange, "k = " + std::to_string(k));
    rules.push_back(ClassifierRule::knn(k));
  }
  if (include_centroid)
    rules.push_back(ClassifierRule::centroid());
  if (rules.empty())
    throw Error(Errc::InvalidSpec, "no classifier rules requested");
  return rules;
}

namespace {

void check_same_size(const LabeledDataset &train, const LabeledDataset &test) {
  if (train.samples.empty())
    throw Error(Errc::EmptyInput, "training set is empty");
  if (test.samples.empty())
    throw Error(Errc::EmptyInput, "test set is empty");
  if (train.class_names != test.class_names)
    throw Error(Errc::InvalidSpec, "train and test class tables differ");
  const int w = train.samples.front().image.width();
  const int h = train.samples.front().image.height();
  for (const auto *set : {&train, &test})
    for (const Sample &s : set->samples)
      if (s.image.width() != w || s.image.height() != h)
        throw Error(Errc::DimensionMismatch, "images of differing sizes in sweep input");
}

// Evaluates every rule on pre-projected test coordinates of one cell.
void score_cell(const TrainedModel &model, const std::vector<FeatureVector> &test_features,
                const std::vector<int> &truth, const std::vector<ClassifierRule> &rules,
                SweepResult &result, std::size_t row) {
  std::vector<Eigen::VectorXd> coords;
  coords.reserve(test_features.size());
  for (const FeatureVector &f : test_features)
    coords.push_back(project(model.eigenspace, f));

  for (std::size_t col = 0; col < rules.size(); ++col) {
    std::vector<int> predicted(coords.size());
    try {
      for (std::size_t i = 0; i < coords.size(); ++i)
        predicted[i] = predict(model, coords[i], rules[col]).label;
    } catch (const Error &e) {
      rethrow_with_context(e, "cell (n_coeffs " + std::to_string(result.coeff_counts[row]) +
                                  ", " + rules[col].name() + ")");
    }
    ConfusionMatrix cm = confusion_matrix(predicted, truth, model.class_names);
    result.rates(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) =
        rate_from_confusion(cm);
    if (!result.confusions.empty())
      result.confusions[row * rules.size() + col] = std::move(cm);
  }
}

std::vector<int> labels_of(const LabeledDataset &data) {
  std::vector<int> out;
  out.reserve(data.samples.size());
  for (const Sample &s : data.samples)
    out.push_back(s.class_id);
  return out;
}

SweepResult make_result(FeatureKind kind, std::vector<int> coeff_counts,
                        std::vector<ClassifierRule> rules, bool keep_confusions) {
  SweepResult result;
  result.kind = kind;
  result.coeff_counts = std::move(coeff_counts);
  result.rules = std::move(rules);
  result.rates = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(result.coeff_counts.size()),
                                       static_cast<Eigen::Index>(result.rules.size()));
  if (keep_confusions)
    result.confusions.resize(result.coeff_counts.size() * result.rules.size());
  return result;
}

} // namespace

SweepResult sweep_dct(const LabeledDataset &train, const LabeledDataset &test,
                      const std::vector<int> &coeff_counts,
                      const std::vector<int> &k_values, bool include_centroid,
                      const SweepOptions &options) {
  check_same_size(train, test);
  if (coeff_counts.empty())
    throw Error(Errc::InvalidSpec, "no coefficient counts requested");
  const int w = train.samples.front().image.width();
  const int h = train.samples.front().image.height();
  const int max_n = *std::max_element(coeff_counts.begin(), coeff_counts.end());
  const int min_n = *std::min_element(coeff_counts.begin(), coeff_counts.end());
  if (min_n < 1 || max_n > w * h)
    throw Error(Errc::CoefficientCountOutOfRange,
                "coefficient counts must lie in [1, " + std::to_string(w * h) + "]");

  SweepResult result = make_result(FeatureKind::DCT, coeff_counts,
                                   make_rules(k_values, include_centroid),
                                   options.keep_confusions);

  // The longest zigzag prefix per image; every cell reads a prefix of it.
  auto prefixes = [&](const LabeledDataset &data) {
    std::vector<Eigen::VectorXd> out(data.samples.size());
    detail::parallel_for(out.size(), options.jobs, [&](std::size_t i) {
      out[i] = zigzag_take(dct2(data.samples[i].image), max_n);
    });
    return out;
  };
  const std::vector<Eigen::VectorXd> train_full = prefixes(train);
  const std::vector<Eigen::VectorXd> test_full = prefixes(test);
  const std::vector<int> train_labels = labels_of(train);
  const std::vector<int> test_labels = labels_of(test);

  detail::parallel_for(coeff_counts.size(), options.jobs, [&](std::size_t row) {
    const int n = coeff_counts[row];
    auto head = [n](const std::vector<Eigen::VectorXd> &full) {
      std::vector<FeatureVector> out;
      out.reserve(full.size());
      for (const Eigen::VectorXd &v : full)
        out.push_back({v.head(n), FeatureKind::DCT});
      return out;
    };
    const FeatureConfig config{FeatureKind::DCT, n, w, h};
    TrainedModel model;
    try {
      model = train_from_features(head(train_full), train_labels, train.class_names,
                                  config, options.pca);
    } catch (const Error &e) {
      rethrow_with_context(e, "cell (n_coeffs " + std::to_string(n) + ")");
    }
    score_cell(model, head(test_full), test_labels, result.rules, result, row);
  });
  return result;
}

SweepResult sweep_raw(const LabeledDataset &train, const LabeledDataset &test,
                      const std::vector<int> &k_values, bool include_centroid,
                      const SweepOptions &options) {
  check_same_size(train, test);
  const int w = train.samples.front().image.width();
  const int h = train.samples.front().image.height();
  SweepResult result = make_result(FeatureKind::RawPixel, {w * h},
                                   make_rules(k_values, include_centroid),
                                   options.keep_confusions);
  const FeatureConfig config{FeatureKind::RawPixel, 0, w, h};
  const TrainedModel model = train_model(train, config, options.pca);
  std::vector<FeatureVector> test_features;
  test_features.reserve(test.samples.size());
  for (const Sample &s : test.samples)
    test_features.push_back(raw_pixel_vector(s.image));
  score_cell(model, test_features, labels_of(test), result.rules, result, 0);
  return result;
}

std::string format_rate(double rate) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", rate);
  return buf;
}

void write_sweep_csv(const SweepResult &result, std::ostream &out) {
  out << "n_coeffs,rule,rate\n";
  for (std::size_t r = 0; r < result.coeff_counts.size(); ++r)
    for (std::size_t c = 0; c < result.rules.size(); ++c)
      out << result.coeff_counts[r] << ',' << result.rules[c].name() << ','
          << format_rate(result.rates(static_cast<Eigen::Index>(r),
                                      static_cast<Eigen::Index>(c)))
          << '\n';
}

void write_confusion_csv(const ConfusionMatrix &cm, std::ostream &out) {
  out << "truth";
  for (const std::string &name : cm.class_names)
    out << ',' << csv_field(name);
  out << '\n';
  for (Eigen::Index t = 0; t < cm.counts.rows(); ++t) {
    out << csv_field(cm.class_names[static_cast<std::size_t>(t)]);
    for (Eigen::Index p = 0; p < cm.counts.cols(); ++p)
      out << ',' << cm.counts(t, p);
    out << '\n';
  }
}

} // namespace facerec
