#ifndef FACEREC_FEATURES_HPP
#define FACEREC_FEATURES_HPP

#include "facerec/error.hpp"
#include "facerec/image.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace facerec {

enum class FeatureKind { RawPixel, DCT };

std::string_view feature_kind_name(FeatureKind kind);

struct FeatureConfig {
  FeatureKind kind = FeatureKind::RawPixel;
  int n_coeffs = 0; ///< DCT only
  int image_w = 128;
  int image_h = 128;

  /// Length of the vectors this configuration produces.
  int dimension() const {
    return kind == FeatureKind::RawPixel ? image_w * image_h : n_coeffs;
  }
  /// Throws InvalidSpec / CoefficientCountOutOfRange.
  void validate() const;

  bool operator==(const FeatureConfig &) const = default;
};

struct FeatureVector {
  Eigen::VectorXd values;
  FeatureKind kind = FeatureKind::RawPixel;
};

struct CoefficientIndex {
  int row = 0;
  int col = 0;
  bool operator==(const CoefficientIndex &) const = default;
};

/// cos(pi / n * (i + 1/2) * k) for i, k in [0, n), laid out with k as the
/// row. The integer phase (2i + 1) k is reduced modulo 4n before scaling.
template <typename Scalar = double>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> dct_basis(int n) {
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> basis(n, n);
  const long period = 4L * n;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i) {
      const long phase = ((2L * i + 1) * k) % period;
      basis(k, i) = static_cast<Scalar>(
          std::cos(std::numbers::pi * static_cast<double>(phase) / (2.0 * n)));
    }
  return basis;
}

/// Unnormalized 2D DCT-II of a rows x cols array:
///   X(k1, k2) = sum_i sum_j x(i, j) cos[pi/N2 (j + 1/2) k2] cos[pi/N1 (i + 1/2) k1]
/// evaluated separably as B_rows * x * B_cols^T.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>
dct2(const Eigen::MatrixBase<Derived> &x) {
  using Scalar = typename Derived::Scalar;
  if (x.size() == 0)
    throw Error(Errc::EmptyImage, "dct2 of an empty array");
  const auto rows = dct_basis<Scalar>(static_cast<int>(x.rows()));
  const auto cols = dct_basis<Scalar>(static_cast<int>(x.cols()));
  return rows * x * cols.transpose();
}

Eigen::MatrixXd dct2(const GrayImage &img);

/// Anti-diagonals k1 + k2 = 0, 1, 2, ... in order. Odd diagonals run from the
/// top-right end to the bottom-left, even ones the other way (JPEG order).
std::vector<CoefficientIndex> zigzag_order(int n_rows, int n_cols);

/// Reads the first `count` entries of `coeffs` in zigzag order.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1>
zigzag_take(const Eigen::MatrixBase<Derived> &coeffs, int count) {
  const auto order =
      zigzag_order(static_cast<int>(coeffs.rows()), static_cast<int>(coeffs.cols()));
  if (count < 1 || count > static_cast<int>(order.size()))
    throw Error(Errc::CoefficientCountOutOfRange,
                std::to_string(count) + " not in [1, " +
                    std::to_string(order.size()) + "]");
  Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> out(count);
  for (int i = 0; i < count; ++i)
    out(i) = coeffs(order[i].row, order[i].col);
  return out;
}

FeatureVector raw_pixel_vector(const GrayImage &img);

/// First `n_coeffs` DCT coefficients of the whole image in zigzag order.
FeatureVector dct_features(const GrayImage &img, int n_coeffs);

/// Dispatches on `config.kind`; the image must already be
/// `config.image_w` x `config.image_h`.
FeatureVector extract_features(const GrayImage &img,
                               const FeatureConfig &config);

} // namespace facerec

#endif // FACEREC_FEATURES_HPP
