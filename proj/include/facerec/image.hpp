#ifndef FACEREC_IMAGE_HPP
#define FACEREC_IMAGE_HPP

#include <Eigen/Dense>
#include <filesystem>

namespace facerec {

using PixelMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Grayscale raster held as real intensities in [0, 255]. Row-major, so
/// `pixels()(row, col)` and the flat storage order agree.
class GrayImage {
public:
  GrayImage() = default;
  GrayImage(int width, int height, double fill = 0.0);
  /// Takes ownership of `pixels`; throws InvalidSpec if any value is
  /// non-finite or outside [0, 255].
  explicit GrayImage(PixelMatrix pixels);

  int width() const noexcept { return static_cast<int>(pixels_.cols()); }
  int height() const noexcept { return static_cast<int>(pixels_.rows()); }
  bool empty() const noexcept { return pixels_.size() == 0; }

  const PixelMatrix &pixels() const noexcept { return pixels_; }
  double operator()(int row, int col) const { return pixels_(row, col); }

  bool operator==(const GrayImage &other) const {
    return pixels_.rows() == other.pixels_.rows() &&
           pixels_.cols() == other.pixels_.cols() &&
           pixels_ == other.pixels_;
  }

private:
  PixelMatrix pixels_;
};

/// Luminance of an 8-bit RGB triple, 0.299 R + 0.587 G + 0.114 B. Evaluated
/// in integer thousandths so white maps to exactly 255.
inline double luma(int r, int g, int b) {
  return static_cast<double>(299 * r + 587 * g + 114 * b) / 1000.0;
}

/// Decodes binary PGM (P5), binary PPM (P6) or 8-bit PNG. The format is
/// sniffed from the file's leading bytes, not its extension. Color input is
/// reduced with `luma`.
GrayImage load_image(const std::filesystem::path &path);

/// Writes a P5 PGM, maxval 255. Pixels are rounded to the nearest integer.
void save_pgm(const GrayImage &img, const std::filesystem::path &path);

/// Bilinear sample at continuous pixel coordinates (x = column, y = row),
/// with pixel centers at integer coordinates and edge clamping.
double sample_bilinear(const GrayImage &img, double x, double y);

/// Bilinear resize with pixel-center alignment.
GrayImage normalize_face(const GrayImage &img, int target_w, int target_h);

} // namespace facerec

#endif // FACEREC_IMAGE_HPP
