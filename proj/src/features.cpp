#include "facerec/features.hpp"

#include <algorithm>

namespace facerec {

std::string_view feature_kind_name(FeatureKind kind) {
  return kind == FeatureKind::RawPixel ? "raw" : "dct";
}

void FeatureConfig::validate() const {
  if (image_w < 1 || image_h < 1)
    throw Error(Errc::InvalidSpec, "image size must be at least 1x1");
  if (kind == FeatureKind::DCT && (n_coeffs < 1 || n_coeffs > image_w * image_h))
    throw Error(Errc::CoefficientCountOutOfRange,
                std::to_string(n_coeffs) + " not in [1, " +
                    std::to_string(image_w * image_h) + "]");
}

Eigen::MatrixXd dct2(const GrayImage &img) {
  if (img.empty())
    throw Error(Errc::EmptyImage, "dct2 of an empty image");
  return dct2(img.pixels());
}

std::vector<CoefficientIndex> zigzag_order(int n_rows, int n_cols) {
  std::vector<CoefficientIndex> order;
  if (n_rows < 1 || n_cols < 1)
    return order;
  order.reserve(static_cast<std::size_t>(n_rows) * n_cols);
  for (int sum = 0; sum <= n_rows + n_cols - 2; ++sum) {
    const int row_lo = std::max(0, sum - (n_cols - 1));
    const int row_hi = std::min(sum, n_rows - 1);
    if (sum % 2 == 0) {
      for (int r = row_hi; r >= row_lo; --r)
        order.push_back({r, sum - r});
    } else {
      for (int r = row_lo; r <= row_hi; ++r)
        order.push_back({r, sum - r});
    }
  }
  return order;
}

FeatureVector raw_pixel_vector(const GrayImage &img) {
  if (img.empty())
    throw Error(Errc::EmptyImage, "raw_pixel_vector of an empty image");
  // Row-major storage: the flat buffer is already the row-wise flattening.
  return {Eigen::Map<const Eigen::VectorXd>(img.pixels().data(), img.pixels().size()),
          FeatureKind::RawPixel};
}

FeatureVector dct_features(const GrayImage &img, int n_coeffs) {
  if (img.empty())
    throw Error(Errc::EmptyImage, "dct_features of an empty image");
  if (n_coeffs < 1 || n_coeffs > img.width() * img.height())
    throw Error(Errc::CoefficientCountOutOfRange,
                std::to_string(n_coeffs) + " not in [1, " +
                    std::to_string(img.width() * img.height()) + "]");
  return {zigzag_take(dct2(img), n_coeffs), FeatureKind::DCT};
}

FeatureVector extract_features(const GrayImage &img, const FeatureConfig &config) {
  config.validate();
  if (img.width() != config.image_w || img.height() != config.image_h)
    throw Error(Errc::DimensionMismatch,
                "image is " + std::to_string(img.width()) + "x" +
                    std::to_string(img.height()) + ", model expects " +
                    std::to_string(config.image_w) + "x" +
                    std::to_string(config.image_h));
  if (config.kind == FeatureKind::RawPixel)
    return raw_pixel_vector(img);
  return dct_features(img, config.n_coeffs);
}

} // namespace facerec
