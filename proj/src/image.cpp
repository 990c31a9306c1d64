#include "facerec/image.hpp"

#include "facerec/error.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

namespace facerec {

namespace fs = std::filesystem;

GrayImage::GrayImage(int width, int height, double fill) {
  if (width < 0 || height < 0)
    throw Error(Errc::InvalidSpec, "negative image dimensions");
  if (!(fill >= 0.0 && fill <= 255.0))
    throw Error(Errc::InvalidSpec, "fill value outside [0, 255]");
  pixels_ = PixelMatrix::Constant(height, width, fill);
}

GrayImage::GrayImage(PixelMatrix pixels) : pixels_(std::move(pixels)) {
  for (Eigen::Index i = 0; i < pixels_.size(); ++i) {
    const double v = pixels_.data()[i];
    if (!std::isfinite(v) || v < 0.0 || v > 255.0)
      throw Error(Errc::InvalidSpec,
                  "pixel value " + std::to_string(v) + " outside [0, 255]");
  }
}

namespace {

std::vector<unsigned char> read_all(const fs::path &path) {
  std::error_code ec;
  if (!fs::is_regular_file(path, ec))
    throw Error(Errc::FileNotFound, path.string());
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(Errc::FileNotFound, path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Minimal reader for the binary netpbm variants.
class NetpbmHeader {
public:
  NetpbmHeader(const std::vector<unsigned char> &bytes, const fs::path &path)
      : bytes_(bytes), path_(path) {}

  int next_int() {
    skip_space_and_comments();
    if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_]))
      throw Error(Errc::CorruptImage, path_.string() + ": malformed header");
    long value = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_++] - '0');
      if (value > (1L << 24))
        throw Error(Errc::CorruptImage, path_.string() + ": header value too large");
    }
    return static_cast<int>(value);
  }

  // Exactly one whitespace byte separates maxval from the raster.
  std::size_t raster_offset() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_]))
      throw Error(Errc::CorruptImage, path_.string() + ": malformed header");
    return pos_ + 1;
  }

  void skip(std::size_t n) { pos_ += n; }

private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n')
          ++pos_;
      } else {
        break;
      }
    }
  }

  const std::vector<unsigned char> &bytes_;
  const fs::path &path_;
  std::size_t pos_ = 0;
};

GrayImage decode_netpbm(const std::vector<unsigned char> &bytes,
                        const fs::path &path, int channels) {
  NetpbmHeader header(bytes, path);
  header.skip(2);
  const int w = header.next_int();
  const int h = header.next_int();
  const int maxval = header.next_int();
  if (w <= 0 || h <= 0)
    throw Error(Errc::CorruptImage, path.string() + ": zero-sized image");
  if (maxval != 255)
    throw Error(Errc::UnsupportedFormat,
                path.string() + ": only maxval 255 is supported, got " +
                    std::to_string(maxval));
  const std::size_t offset = header.raster_offset();
  const std::size_t needed =
      static_cast<std::size_t>(w) * static_cast<std::size_t>(h) * channels;
  if (bytes.size() < offset + needed)
    throw Error(Errc::CorruptImage, path.string() + ": truncated raster");

  PixelMatrix px(h, w);
  const unsigned char *raster = bytes.data() + offset;
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const unsigned char *p =
          raster + (static_cast<std::size_t>(r) * w + c) * channels;
      px(r, c) = channels == 1 ? static_cast<double>(p[0])
                               : luma(p[0], p[1], p[2]);
    }
  }
  return GrayImage(std::move(px));
}

GrayImage decode_png(const std::vector<unsigned char> &bytes,
                     const fs::path &path) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size()))
    throw Error(Errc::CorruptImage, path.string() + ": " + image.message);

  const bool color = (image.format & PNG_FORMAT_FLAG_COLOR) != 0;
  image.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  const int channels = color ? 3 : 1;
  const int w = static_cast<int>(image.width);
  const int h = static_cast<int>(image.height);
  std::vector<unsigned char> buffer(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, buffer.data(), 0, nullptr)) {
    const std::string msg = image.message;
    png_image_free(&image);
    throw Error(Errc::CorruptImage, path.string() + ": " + msg);
  }

  PixelMatrix px(h, w);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const unsigned char *p =
          buffer.data() + (static_cast<std::size_t>(r) * w + c) * channels;
      px(r, c) = color ? luma(p[0], p[1], p[2]) : static_cast<double>(p[0]);
    }
  }
  return GrayImage(std::move(px));
}

} // namespace

GrayImage load_image(const fs::path &path) {
  const std::vector<unsigned char> bytes = read_all(path);
  if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '5')
    return decode_netpbm(bytes, path, 1);
  if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '6')
    return decode_netpbm(bytes, path, 3);
  static constexpr unsigned char png_sig[8] = {0x89, 'P', 'N', 'G',
                                               '\r', '\n', 0x1a, '\n'};
  if (bytes.size() >= 8 && std::equal(png_sig, png_sig + 8, bytes.begin()))
    return decode_png(bytes, path);
  throw Error(Errc::UnsupportedFormat,
              path.string() + ": not a P5/P6 netpbm or PNG file");
}

void save_pgm(const GrayImage &img, const fs::path &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw Error(Errc::IoError, "cannot open " + path.string() + " for writing");
  out << "P5\n" << img.width() << ' ' << img.height() << "\n255\n";
  std::vector<char> raster(static_cast<std::size_t>(img.pixels().size()));
  for (std::size_t i = 0; i < raster.size(); ++i) {
    const double v = std::clamp(std::round(img.pixels().data()[i]), 0.0, 255.0);
    raster[i] = static_cast<char>(static_cast<unsigned char>(v));
  }
  out.write(raster.data(), static_cast<std::streamsize>(raster.size()));
  if (!out)
    throw Error(Errc::IoError, "write failed: " + path.string());
}

double sample_bilinear(const GrayImage &img, double x, double y) {
  if (img.empty())
    throw Error(Errc::EmptyImage, "cannot sample an empty image");
  const double xc = std::clamp(x, 0.0, static_cast<double>(img.width() - 1));
  const double yc = std::clamp(y, 0.0, static_cast<double>(img.height() - 1));
  const int x0 = static_cast<int>(std::floor(xc));
  const int y0 = static_cast<int>(std::floor(yc));
  const int x1 = std::min(x0 + 1, img.width() - 1);
  const int y1 = std::min(y0 + 1, img.height() - 1);
  const double fx = xc - x0;
  const double fy = yc - y0;
  const double top = img(y0, x0) * (1.0 - fx) + img(y0, x1) * fx;
  const double bottom = img(y1, x0) * (1.0 - fx) + img(y1, x1) * fx;
  return top * (1.0 - fy) + bottom * fy;
}

GrayImage normalize_face(const GrayImage &img, int target_w, int target_h) {
  if (img.empty())
    throw Error(Errc::EmptyImage, "cannot resize an empty image");
  if (target_w < 1 || target_h < 1)
    throw Error(Errc::InvalidSpec, "target size must be at least 1x1");
  if (target_w == img.width() && target_h == img.height())
    return img;

  const double sx = static_cast<double>(img.width()) / target_w;
  const double sy = static_cast<double>(img.height()) / target_h;
  PixelMatrix out(target_h, target_w);
  for (int r = 0; r < target_h; ++r) {
    const double y = (r + 0.5) * sy - 0.5;
    for (int c = 0; c < target_w; ++c) {
      const double x = (c + 0.5) * sx - 0.5;
      out(r, c) = std::clamp(sample_bilinear(img, x, y), 0.0, 255.0);
    }
  }
  return GrayImage(std::move(out));
}

} // namespace facerec
