#include "facerec/model_io.hpp"

#include <bit>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>

namespace facerec {

namespace fs = std::filesystem;

namespace {

[[noreturn]] void bad_model(const std::string &why) {
  throw Error(Errc::ModelFormatError, why);
}

void write_doubles(std::ostream &out, const double *data, Eigen::Index count) {
  for (Eigen::Index i = 0; i < count; ++i) {
    auto bits = std::bit_cast<std::uint64_t>(data[i]);
    char bytes[8];
    for (char &b : bytes) {
      b = static_cast<char>(bits & 0xffU);
      bits >>= 8;
    }
    out.write(bytes, 8);
  }
}

void read_doubles(std::istream &in, double *data, Eigen::Index count) {
  for (Eigen::Index i = 0; i < count; ++i) {
    unsigned char bytes[8];
    if (!in.read(reinterpret_cast<char *>(bytes), 8))
      bad_model("truncated binary payload");
    std::uint64_t bits = 0;
    for (int b = 7; b >= 0; --b)
      bits = (bits << 8) | bytes[b];
    data[i] = std::bit_cast<double>(bits);
  }
}

std::string next_line(std::istream &in, const char *what) {
  std::string line;
  if (!std::getline(in, line))
    bad_model(std::string("missing ") + what + " line");
  return line;
}

// Reads "<keyword> a b ..." and returns the stream positioned after keyword.
std::istringstream keyword_line(std::istream &in, const std::string &keyword) {
  std::istringstream fields(next_line(in, keyword.c_str()));
  std::string word;
  if (!(fields >> word) || word != keyword)
    bad_model("expected '" + keyword + "' line");
  return fields;
}

template <typename T> T field(std::istringstream &fields, const char *what) {
  T value{};
  if (!(fields >> value))
    bad_model(std::string("malformed ") + what);
  return value;
}

} // namespace

void save_model(const TrainedModel &model, std::ostream &out) {
  const Eigenspace &es = model.eigenspace;
  const Eigen::Index n = es.dimension();
  const Eigen::Index k = es.size();
  const Eigen::Index m = model.train_count();
  if (model.train_coords.rows() != k || model.train_coords.cols() != m ||
      model.centroids.rows() != k ||
      model.centroids.cols() != model.num_classes() || es.components.rows() != n ||
      es.eigenvalues.size() != k)
    throw Error(Errc::DimensionMismatch, "model parts have inconsistent shapes");

  out << "EIGC " << kModelFormatVersion << '\n';
  out << "feature " << feature_kind_name(model.features.kind) << ' '
      << model.features.n_coeffs << '\n';
  out << "size " << model.features.image_w << ' ' << model.features.image_h << '\n';
  out << "classes " << model.num_classes() << '\n';
  for (const std::string &name : model.class_names) {
    if (name.empty() || name.find_first_of("\r\n") != std::string::npos)
      throw Error(Errc::InvalidSpec, "class names must be non-empty single lines");
    out << name << '\n';
  }
  out << "dims " << n << ' ' << k << ' ' << m << '\n';
  out << "labels";
  for (int label : model.train_labels)
    out << ' ' << label;
  out << "\ndata\n";
  write_doubles(out, es.mean.data(), n);
  write_doubles(out, es.components.data(), n * k);
  write_doubles(out, es.eigenvalues.data(), k);
  write_doubles(out, model.train_coords.data(), k * m);
  write_doubles(out, model.centroids.data(), k * model.num_classes());
  if (!out)
    throw Error(Errc::IoError, "failed writing model");
}

void save_model(const TrainedModel &model, const fs::path &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw Error(Errc::IoError, "cannot open " + path.string() + " for writing");
  save_model(model, out);
  out.close();
  if (!out)
    throw Error(Errc::IoError, "failed writing " + path.string());
}

TrainedModel load_model(std::istream &in) {
  {
    std::istringstream magic(next_line(in, "magic"));
    std::string word;
    int version = 0;
    if (!(magic >> word) || word != "EIGC")
      bad_model("not a model file (bad magic)");
    if (!(magic >> version))
      bad_model("missing format version");
    if (version != kModelFormatVersion)
      bad_model("unsupported model format version " + std::to_string(version) +
                " (expected " + std::to_string(kModelFormatVersion) + ")");
  }

  TrainedModel model;
  {
    auto f = keyword_line(in, "feature");
    const auto kind = field<std::string>(f, "feature kind");
    if (kind == "raw")
      model.features.kind = FeatureKind::RawPixel;
    else if (kind == "dct")
      model.features.kind = FeatureKind::DCT;
    else
      bad_model("unknown feature kind '" + kind + "'");
    model.features.n_coeffs = field<int>(f, "coefficient count");
  }
  {
    auto f = keyword_line(in, "size");
    model.features.image_w = field<int>(f, "width");
    model.features.image_h = field<int>(f, "height");
  }
  try {
    model.features.validate();
  } catch (const Error &e) {
    bad_model(std::string("invalid feature configuration: ") + e.what());
  }

  auto cf = keyword_line(in, "classes");
  const int n_classes = field<int>(cf, "class count");
  if (n_classes < 1 || n_classes > 1000000)
    bad_model("implausible class count");
  for (int c = 0; c < n_classes; ++c)
    model.class_names.push_back(next_line(in, "class name"));

  auto df = keyword_line(in, "dims");
  const auto n = field<Eigen::Index>(df, "dimension");
  const auto k = field<Eigen::Index>(df, "component count");
  const auto m = field<Eigen::Index>(df, "training count");
  if (n != model.features.dimension() || k < 0 || k > m || m < 1)
    bad_model("inconsistent dimensions");

  auto lf = keyword_line(in, "labels");
  model.train_labels.reserve(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) {
    const int label = field<int>(lf, "label");
    if (label < 0 || label >= n_classes)
      bad_model("label out of range");
    model.train_labels.push_back(label);
  }
  if (next_line(in, "data") != "data")
    bad_model("expected 'data' line");

  Eigenspace &es = model.eigenspace;
  es.training_count = static_cast<int>(m);
  es.mean.resize(n);
  es.components.resize(n, k);
  es.eigenvalues.resize(k);
  model.train_coords.resize(k, m);
  model.centroids.resize(k, n_classes);
  read_doubles(in, es.mean.data(), n);
  read_doubles(in, es.components.data(), n * k);
  read_doubles(in, es.eigenvalues.data(), k);
  read_doubles(in, model.train_coords.data(), k * m);
  read_doubles(in, model.centroids.data(), k * n_classes);
  if (in.peek() != std::char_traits<char>::eof())
    bad_model("trailing bytes after payload");
  return model;
}

TrainedModel load_model(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(Errc::FileNotFound, path.string());
  try {
    return load_model(in);
  } catch (const Error &e) {
    rethrow_with_context(e, path.string());
  }
}

} // namespace facerec
