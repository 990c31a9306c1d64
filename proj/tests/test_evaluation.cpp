#include "facerec/evaluation.hpp"

#include "oracles.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

using namespace facerec;
using testutil::error_code_of;

namespace {

ConfusionMatrix make_cm(std::initializer_list<std::initializer_list<long>> rows) {
  ConfusionMatrix cm;
  const auto n = static_cast<Eigen::Index>(rows.size());
  cm.counts.resize(n, n);
  Eigen::Index r = 0;
  for (const auto &row : rows) {
    Eigen::Index c = 0;
    for (long v : row)
      cm.counts(r, c++) = v;
    cm.class_names.push_back("c" + std::to_string(r));
    ++r;
  }
  return cm;
}

LabeledDataset small_synthetic(std::uint64_t seed, int classes = 2, int noise = 30) {
  return generate_synthetic({classes, 10, 5, 16, 16, 8, noise}, seed);
}

} // namespace

TEST(RecognitionRate, Examples) {
  std::vector<int> truth(100, 1), predicted(100, 1);
  predicted[17] = 0;
  EXPECT_EQ(recognition_rate(predicted, truth), 0.99);
  EXPECT_EQ(recognition_rate(truth, truth), 1.0);
  std::vector<int> wrong(100, 0);
  EXPECT_EQ(recognition_rate(wrong, truth), 0.0);
  EXPECT_EQ(error_code_of([&] { recognition_rate(std::vector<int>{1}, truth); }), Errc::LengthMismatch);
  EXPECT_EQ(error_code_of([] { recognition_rate(std::vector<int>{}, std::vector<int>{}); }),
            Errc::EmptyInput);
}

TEST(RecognitionRate, IsOneMinusErrorFraction) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> label(0, 3), len(1, 60);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<int> t, p;
    const int n = len(rng);
    long wrong = 0;
    for (int i = 0; i < n; ++i) {
      t.push_back(label(rng));
      p.push_back(label(rng));
      wrong += t.back() != p.back();
    }
    const double r = recognition_rate(p, t);
    EXPECT_GE(r, 0.0);
    EXPECT_LE(r, 1.0);
    EXPECT_NEAR(r, 1.0 - static_cast<double>(wrong) / n, 1e-15);
  }
}

TEST(ConfusionMatrix, DirectCounts) {
  const ConfusionMatrix cm =
      confusion_matrix(std::vector<int>{0, 1, 1}, std::vector<int>{0, 0, 1}, {"A", "B"});
  EXPECT_EQ(cm.counts, (Eigen::Matrix<long, 2, 2>() << 1, 1, 0, 1).finished());

  const std::vector<int> truth{0, 0, 1, 2, 2, 2};
  const ConfusionMatrix perfect = confusion_matrix(truth, truth, {"a", "b", "c"});
  EXPECT_EQ(perfect.counts, Eigen::Vector3<long>(2, 1, 3).asDiagonal().toDenseMatrix());

  EXPECT_EQ(error_code_of([] { confusion_matrix(std::vector<int>{2}, std::vector<int>{0}, {"a", "b"}); }),
            Errc::UnknownLabel);
  EXPECT_EQ(error_code_of([] { confusion_matrix(std::vector<int>{0, 1}, std::vector<int>{0}, {"a", "b"}); }),
            Errc::LengthMismatch);
}

TEST(ConfusionMatrix, MatchesTallyAndIsPermutationInvariant) {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> label(0, 4);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<int> t(80), p(80);
    for (int i = 0; i < 80; ++i) {
      t[static_cast<std::size_t>(i)] = label(rng);
      p[static_cast<std::size_t>(i)] = label(rng);
    }
    const std::vector<std::string> names{"a", "b", "c", "d", "e"};
    const ConfusionMatrix cm = confusion_matrix(p, t, names);
    const auto tally = oracle::tally_confusion(t, p, 5);
    for (int r = 0; r < 5; ++r)
      for (int c = 0; c < 5; ++c)
        EXPECT_EQ(cm.counts(r, c), tally[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]);
    EXPECT_EQ(cm.total(), 80);

    std::vector<std::size_t> perm(80);
    std::iota(perm.begin(), perm.end(), 0u);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<int> t2, p2;
    for (std::size_t i : perm) {
      t2.push_back(t[i]);
      p2.push_back(p[i]);
    }
    EXPECT_EQ(confusion_matrix(p2, t2, names), cm);
  }
}

TEST(RateFromConfusion, ReferenceMatrices) {
  EXPECT_EQ(rate_from_confusion(make_cm({{49, 1}, {3, 47}})), 0.96);
  EXPECT_EQ(rate_from_confusion(make_cm({{50, 0}, {1, 49}})), 0.99);
  EXPECT_EQ(rate_from_confusion(make_cm({{28, 9, 7, 6}, {7, 38, 2, 3}, {10, 5, 28, 7}, {3, 4, 5, 38}})),
            0.66);
  EXPECT_EQ(rate_from_confusion(make_cm({{26, 16, 2, 6}, {2, 44, 3, 1}, {3, 6, 34, 7}, {1, 1, 16, 32}})),
            0.68);
  EXPECT_EQ(error_code_of([] { rate_from_confusion(make_cm({{0, 0}, {0, 0}})); }), Errc::EmptyMatrix);
}

TEST(Evaluate, TrainingSplitWithOneNearestNeighborIsPerfect) {
  const LabeledDataset data = small_synthetic(3, 3, 60);
  const LabeledDataset train = data.subset(Split::Train);
  for (FeatureConfig cfg : {FeatureConfig{FeatureKind::RawPixel, 0, 16, 16},
                            FeatureConfig{FeatureKind::DCT, 5, 16, 16}}) {
    const TrainedModel model = train_model(train, cfg);
    const Evaluation ev = evaluate(model, train, ClassifierRule::knn(1));
    EXPECT_EQ(ev.rate, 1.0);
    EXPECT_EQ(ev.confusion.correct(), 30);
  }
}

TEST(Evaluate, LowNoiseSyntheticClearsFloorForEveryRule) {
  const LabeledDataset data = generate_synthetic({2, 20, 10, 32, 32, 10, 6}, 4);
  const TrainedModel model = train_model(data.subset(Split::Train), {FeatureKind::DCT, 30, 32, 32});
  for (ClassifierRule rule : make_rules({1, 3, 5, 7, 9}, true))
    EXPECT_GE(evaluate(model, data.subset(Split::Test), rule).rate, 0.95) << rule.name();
}

TEST(Evaluate, RateAgreesWithConfusionAcrossModels) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const LabeledDataset data = small_synthetic(seed, 2 + static_cast<int>(seed % 3), 90);
    const FeatureConfig cfg = seed % 2 ? FeatureConfig{FeatureKind::RawPixel, 0, 16, 16}
                                       : FeatureConfig{FeatureKind::DCT, 3 + static_cast<int>(seed), 16, 16};
    const TrainedModel model = train_model(data.subset(Split::Train), cfg);
    const LabeledDataset test = data.subset(Split::Test);
    const Evaluation ev = evaluate(model, test, ClassifierRule::knn(3));
    EXPECT_EQ(ev.rate, rate_from_confusion(ev.confusion));
    EXPECT_EQ(ev.confusion.total(), static_cast<long>(test.samples.size()));
    const Evaluation again = evaluate(model, test, ClassifierRule::knn(3), 3);
    EXPECT_EQ(again.confusion, ev.confusion);
  }
}

TEST(Evaluate, MatchesTestLabelsByName) {
  const LabeledDataset data = small_synthetic(8, 2, 10);
  const TrainedModel model = train_model(data.subset(Split::Train), {FeatureKind::DCT, 6, 16, 16});
  LabeledDataset test = data.subset(Split::Test);
  const Evaluation direct = evaluate(model, test, ClassifierRule::centroid());

  LabeledDataset swapped = test;
  swapped.class_names = {test.class_names[1], test.class_names[0]};
  for (Sample &s : swapped.samples)
    s.class_id = 1 - s.class_id;
  EXPECT_EQ(evaluate(model, swapped, ClassifierRule::centroid()).confusion, direct.confusion);

  swapped.class_names[0] = "stranger";
  EXPECT_EQ(error_code_of([&] { evaluate(model, swapped, ClassifierRule::centroid()); }),
            Errc::UnknownLabel);
  EXPECT_EQ(error_code_of([&] { evaluate(model, LabeledDataset{{}, test.class_names}, ClassifierRule::knn(1)); }),
            Errc::EmptyInput);
}

TEST(SweepDct, GridShapeAndSelfEvaluation) {
  const LabeledDataset data = small_synthetic(5);
  const LabeledDataset train = data.subset(Split::Train);
  const SweepResult one = sweep_dct(train, train, {4}, {1}, false);
  ASSERT_EQ(one.rates.rows(), 1);
  ASSERT_EQ(one.rates.cols(), 1);
  EXPECT_EQ(one.rates(0, 0), 1.0);

  const SweepResult grid = sweep_dct(train, data.subset(Split::Test), {2, 3, 5, 8}, {1, 3, 5}, true);
  EXPECT_EQ(grid.rates.rows(), 4);
  EXPECT_EQ(grid.rates.cols(), 4);
  EXPECT_EQ(grid.rules.back(), ClassifierRule::centroid());
  EXPECT_GE(grid.rates.minCoeff(), 0.0);
  EXPECT_LE(grid.rates.maxCoeff(), 1.0);
}

TEST(SweepDct, DeterministicAcrossRunsAndThreads) {
  const LabeledDataset data = small_synthetic(6, 3, 80);
  const LabeledDataset train = data.subset(Split::Train), test = data.subset(Split::Test);
  SweepOptions serial, threaded;
  threaded.jobs = 4;
  serial.keep_confusions = threaded.keep_confusions = true;
  const std::vector<int> coeffs{3, 6, 9, 12, 20};
  const SweepResult a = sweep_dct(train, test, coeffs, {1, 2, 5}, true, serial);
  const SweepResult b = sweep_dct(train, test, coeffs, {1, 2, 5}, true, serial);
  const SweepResult c = sweep_dct(train, test, coeffs, {1, 2, 5}, true, threaded);
  EXPECT_EQ(a.rates, b.rates);
  EXPECT_EQ(a.rates, c.rates);
  for (std::size_t i = 0; i < a.confusions.size(); ++i)
    EXPECT_EQ(a.confusions[i], c.confusions[i]);
}

TEST(SweepDct, EveryCellMatchesStandaloneEvaluation) {
  const LabeledDataset data = small_synthetic(7, 2, 100);
  const LabeledDataset train = data.subset(Split::Train), test = data.subset(Split::Test);
  const std::vector<int> coeffs{2, 7, 15};
  const SweepResult grid = sweep_dct(train, test, coeffs, {1, 3}, true);
  for (std::size_t r = 0; r < coeffs.size(); ++r) {
    const TrainedModel model = train_model(train, {FeatureKind::DCT, coeffs[r], 16, 16});
    for (std::size_t c = 0; c < grid.rules.size(); ++c)
      EXPECT_EQ(evaluate(model, test, grid.rules[c]).rate,
                grid.rates(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)));
  }
}

TEST(SweepDct, ErrorsNameTheCell) {
  const LabeledDataset data = small_synthetic(8);
  const LabeledDataset train = data.subset(Split::Train), test = data.subset(Split::Test);
  EXPECT_EQ(error_code_of([&] { sweep_dct(train, test, {257}, {1}, false); }),
            Errc::CoefficientCountOutOfRange);
  try {
    sweep_dct(train, test, {4}, {21}, false);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), Errc::KOutOfRange);
    EXPECT_NE(std::string(e.what()).find("n_coeffs 4, knn21"), std::string::npos) << e.what();
  }
}

TEST(SweepRaw, ShapeAndSelfMatch) {
  const LabeledDataset data = small_synthetic(9, 2, 100);
  const LabeledDataset train = data.subset(Split::Train), test = data.subset(Split::Test);
  const SweepResult full = sweep_raw(train, test, {1, 3, 5, 7, 9}, true);
  EXPECT_EQ(full.rates.rows(), 1);
  EXPECT_EQ(full.rates.cols(), 6);
  EXPECT_EQ(full.coeff_counts, std::vector<int>{256});
  EXPECT_EQ(full.rules.back(), ClassifierRule::centroid());
  EXPECT_GE(full.rates.minCoeff(), 0.0);
  EXPECT_LE(full.rates.maxCoeff(), 1.0);
  EXPECT_EQ(sweep_raw(train, train, {1}, false).rates(0, 0), 1.0);
}

TEST(SweepCsv, HeaderRuleSpellingAndPrecision) {
  SweepResult r;
  r.coeff_counts = {10, 11};
  r.rules = make_rules({1, 3}, true);
  r.rates.resize(2, 3);
  r.rates << 1.0, 0.5, 2.0 / 3.0, 0.25, 0.125, 0.99;
  std::ostringstream out;
  write_sweep_csv(r, out);
  EXPECT_EQ(out.str(), "n_coeffs,rule,rate\n"
                       "10,knn1,1.000000\n10,knn3,0.500000\n10,centroid,0.666667\n"
                       "11,knn1,0.250000\n11,knn3,0.125000\n11,centroid,0.990000\n");
}

TEST(ConfusionCsv, Layout) {
  ConfusionMatrix cm = make_cm({{49, 1}, {3, 47}});
  cm.class_names = {"male", "fe,male"};
  std::ostringstream out;
  write_confusion_csv(cm, out);
  EXPECT_EQ(out.str(), "truth,male,\"fe,male\"\nmale,49,1\n\"fe,male\",3,47\n");
}
