#include "facerec/features.hpp"

#include "oracles.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

using namespace facerec;
using testutil::error_code_of;

namespace {

Eigen::MatrixXd to_matrix(const oracle::Grid &g) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(g.size()),
                    static_cast<Eigen::Index>(g.front().size()));
  for (std::size_t r = 0; r < g.size(); ++r)
    for (std::size_t c = 0; c < g.front().size(); ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = g[r][c];
  return m;
}

GrayImage random_image(std::mt19937_64 &rng, int w, int h) {
  std::uniform_real_distribution<double> u(0, 255);
  PixelMatrix px(h, w);
  for (Eigen::Index i = 0; i < px.size(); ++i)
    px.data()[i] = u(rng);
  return GrayImage(px);
}

std::vector<std::pair<int, int>> pairs(const std::vector<CoefficientIndex> &order) {
  std::vector<std::pair<int, int>> out;
  for (const auto &i : order)
    out.emplace_back(i.row, i.col);
  return out;
}

} // namespace

TEST(RawPixelVector, RowMajorFlattening) {
  PixelMatrix px(2, 2);
  px << 1, 2, 3, 4;
  const FeatureVector f = raw_pixel_vector(GrayImage(px));
  EXPECT_EQ(f.kind, FeatureKind::RawPixel);
  EXPECT_EQ(f.values, (Eigen::VectorXd(4) << 1, 2, 3, 4).finished());
  EXPECT_EQ(raw_pixel_vector(GrayImage(1, 1, 9.0)).values, Eigen::VectorXd::Constant(1, 9.0));
  EXPECT_EQ(raw_pixel_vector(GrayImage(128, 128, 1.0)).values.size(), 16384);
  EXPECT_EQ(error_code_of([] { raw_pixel_vector(GrayImage()); }), Errc::EmptyImage);
}

TEST(Dct2, ConstantImageHasOnlyDcTerm) {
  const Eigen::MatrixXd x = dct2(GrayImage(2, 2, 5.0));
  EXPECT_NEAR(x(0, 0), 20.0, 1e-9);
  EXPECT_NEAR(x(0, 1), 0.0, 1e-9);
  EXPECT_NEAR(x(1, 0), 0.0, 1e-9);
  EXPECT_NEAR(x(1, 1), 0.0, 1e-9);
}

TEST(Dct2, TwoSampleRowByHand) {
  // X(0,1) = cos(pi/4) - cos(3 pi/4) = sqrt(2)
  const Eigen::MatrixXd x = dct2((Eigen::MatrixXd(1, 2) << 1, -1).finished());
  EXPECT_NEAR(x(0, 0), 0.0, 1e-9);
  EXPECT_NEAR(x(0, 1), std::sqrt(2.0), 1e-9);
}

TEST(Dct2, MatchesDirectDoubleSum) {
  std::mt19937_64 rng(2024);
  const oracle::Grid g = oracle::random_grid(rng, 6, 5);
  const Eigen::MatrixXd expected = to_matrix(oracle::dct2_direct(g));
  EXPECT_LE((dct2(to_matrix(g)) - expected).cwiseAbs().maxCoeff(), 1e-6);

  std::uniform_int_distribution<int> size(1, 8);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const oracle::Grid r = oracle::random_grid(rng, static_cast<std::size_t>(size(rng)),
                                               static_cast<std::size_t>(size(rng)));
    worst = std::max(worst, (dct2(to_matrix(r)) - to_matrix(oracle::dct2_direct(r)))
                                .cwiseAbs()
                                .maxCoeff());
  }
  EXPECT_LE(worst, 1e-6);
}

TEST(Dct2, IsLinearAndMapsZeroToZero) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> coef(-3, 3);
  std::uniform_int_distribution<int> size(1, 9);
  for (int trial = 0; trial < 30; ++trial) {
    const int r = size(rng), c = size(rng);
    const Eigen::MatrixXd a = Eigen::MatrixXd::Random(r, c) * 100;
    const Eigen::MatrixXd b = Eigen::MatrixXd::Random(r, c) * 100;
    const double s = coef(rng), t = coef(rng);
    const Eigen::MatrixXd lhs = dct2(s * a + t * b);
    const Eigen::MatrixXd rhs = s * dct2(a) + t * dct2(b);
    EXPECT_LE((lhs - rhs).cwiseAbs().maxCoeff(), 1e-6);
    EXPECT_EQ(dct2(Eigen::MatrixXd::Zero(r, c)), Eigen::MatrixXd::Zero(r, c));
  }
}

TEST(Dct2, WorksForFloatScalars) {
  const Eigen::MatrixXf x = dct2(Eigen::MatrixXf::Constant(3, 2, 1.0f));
  EXPECT_NEAR(x(0, 0), 6.0f, 1e-5f);
  EXPECT_NEAR(x(2, 1), 0.0f, 1e-5f);
}

TEST(ZigzagOrder, KnownSequences) {
  using P = std::vector<std::pair<int, int>>;
  EXPECT_EQ(pairs(zigzag_order(3, 3)),
            (P{{0, 0}, {0, 1}, {1, 0}, {2, 0}, {1, 1}, {0, 2}, {1, 2}, {2, 1}, {2, 2}}));
  EXPECT_EQ(pairs(zigzag_order(1, 4)), (P{{0, 0}, {0, 1}, {0, 2}, {0, 3}}));
  const P four = pairs(zigzag_order(4, 4));
  const P first6(four.begin(), four.begin() + 6);
  EXPECT_EQ(first6, (P{{0, 0}, {0, 1}, {1, 0}, {2, 0}, {1, 1}, {0, 2}}));
  EXPECT_EQ(pairs(zigzag_order(4, 1)), (P{{0, 0}, {1, 0}, {2, 0}, {3, 0}}));
}

TEST(ZigzagOrder, IsAPermutationOrderedByDiagonal) {
  for (int r = 1; r <= 16; ++r)
    for (int c = 1; c <= 16; ++c) {
      const auto order = zigzag_order(r, c);
      ASSERT_EQ(order.size(), static_cast<std::size_t>(r * c));
      std::set<std::pair<int, int>> seen;
      int last_sum = 0;
      for (const auto &i : order) {
        ASSERT_TRUE(i.row >= 0 && i.row < r && i.col >= 0 && i.col < c);
        ASSERT_GE(i.row + i.col, last_sum);
        last_sum = i.row + i.col;
        seen.emplace(i.row, i.col);
      }
      EXPECT_EQ(seen.size(), order.size());
      EXPECT_EQ(order.front(), (CoefficientIndex{0, 0}));
    }
}

TEST(DctFeatures, PrefixesAndRange) {
  std::mt19937_64 rng(8);
  const GrayImage img = random_image(rng, 7, 5);
  const Eigen::MatrixXd x = dct2(img);

  const FeatureVector one = dct_features(img, 1);
  EXPECT_EQ(one.kind, FeatureKind::DCT);
  ASSERT_EQ(one.values.size(), 1);
  EXPECT_EQ(one.values(0), x(0, 0));

  const FeatureVector c = dct_features(GrayImage(2, 2, 5.0), 4);
  EXPECT_NEAR(c.values(0), 20.0, 1e-9);
  EXPECT_NEAR(c.values.tail(3).cwiseAbs().maxCoeff(), 0.0, 1e-9);

  EXPECT_EQ(dct_features(GrayImage(128, 128, 100.0), 133).values.size(), 133);
  EXPECT_EQ(error_code_of([&] { dct_features(img, 0); }), Errc::CoefficientCountOutOfRange);
  EXPECT_EQ(error_code_of([&] { dct_features(img, 36); }), Errc::CoefficientCountOutOfRange);
}

TEST(DctFeatures, FullLengthContainsEveryCoefficientOnce) {
  std::mt19937_64 rng(9);
  const GrayImage img = random_image(rng, 6, 4);
  const Eigen::MatrixXd x = dct2(img);
  Eigen::VectorXd all = dct_features(img, 24).values;
  std::vector<double> got(all.data(), all.data() + all.size());
  std::vector<double> want(x.data(), x.data() + x.size());
  std::sort(got.begin(), got.end());
  std::sort(want.begin(), want.end());
  EXPECT_EQ(got, want);
}

TEST(ExtractFeatures, ChecksConfiguration) {
  const GrayImage img(8, 6, 10.0);
  EXPECT_EQ(extract_features(img, {FeatureKind::RawPixel, 0, 8, 6}).values.size(), 48);
  EXPECT_EQ(extract_features(img, {FeatureKind::DCT, 12, 8, 6}).values.size(), 12);
  EXPECT_EQ(error_code_of([&] { extract_features(img, {FeatureKind::RawPixel, 0, 6, 8}); }),
            Errc::DimensionMismatch);
  EXPECT_EQ(error_code_of([&] { extract_features(img, {FeatureKind::DCT, 49, 8, 6}); }),
            Errc::CoefficientCountOutOfRange);
}
