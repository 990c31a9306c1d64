#include "facerec/dataset.hpp"

#include "facerec/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <unordered_map>
#include <utility>

namespace facerec {

namespace fs = std::filesystem;

std::string_view split_name(Split s) {
  return s == Split::Train ? "train" : "test";
}

LabeledDataset LabeledDataset::subset(Split split) const {
  LabeledDataset out;
  out.class_names = class_names;
  for (const Sample &s : samples)
    if (s.split == split)
      out.samples.push_back(s);
  return out;
}

std::vector<std::size_t> LabeledDataset::class_counts() const {
  std::vector<std::size_t> counts(class_names.size(), 0);
  for (const Sample &s : samples)
    ++counts.at(static_cast<std::size_t>(s.class_id));
  return counts;
}

void LabeledDataset::validate() const {
  if (class_names.empty())
    throw Error(Errc::InvalidSpec, "dataset has no classes");
  for (std::size_t i = 0; i < class_names.size(); ++i)
    for (std::size_t j = i + 1; j < class_names.size(); ++j)
      if (class_names[i] == class_names[j])
        throw Error(Errc::InvalidSpec, "duplicate class name '" + class_names[i] + "'");
  for (const Sample &s : samples)
    if (s.class_id < 0 || s.class_id >= num_classes())
      throw Error(Errc::InvalidSpec,
                  "class id " + std::to_string(s.class_id) + " out of range");
}

namespace {

std::vector<std::string> split_tabs(const std::string &line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab - start));
    if (tab == std::string::npos)
      break;
    start = tab + 1;
  }
  return fields;
}

} // namespace

std::vector<ManifestEntry> parse_manifest(std::istream &in) {
  std::vector<ManifestEntry> entries;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#')
      continue;

    auto fail = [&](const std::string &why) {
      throw Error(Errc::ManifestParseError,
                  "line " + std::to_string(line_no) + ": " + why);
    };
    const std::vector<std::string> fields = split_tabs(line);
    if (fields.size() != 3)
      fail("expected 3 tab-separated fields, got " +
           std::to_string(fields.size()));
    ManifestEntry e;
    e.path = fields[0];
    e.label = fields[1];
    e.line = line_no;
    if (e.path.empty())
      fail("empty path");
    if (e.label.empty())
      fail("empty label");
    if (fields[2] == "train")
      e.split = Split::Train;
    else if (fields[2] == "test")
      e.split = Split::Test;
    else
      fail("unknown split '" + fields[2] + "' (expected train or test)");
    entries.push_back(std::move(e));
  }
  return entries;
}

LabeledDataset load_manifest(const fs::path &manifest, const fs::path &root,
                             int width, int height) {
  std::ifstream in(manifest);
  if (!in)
    throw Error(Errc::FileNotFound, manifest.string());
  std::vector<ManifestEntry> entries;
  try {
    entries = parse_manifest(in);
  } catch (const Error &e) {
    rethrow_with_context(e, manifest.string());
  }
  if (entries.empty())
    throw Error(Errc::ManifestParseError, manifest.string() + ": no entries");

  LabeledDataset data;
  std::unordered_map<std::string, int> ids;
  data.samples.reserve(entries.size());
  for (const ManifestEntry &e : entries) {
    auto [it, inserted] = ids.try_emplace(e.label, data.num_classes());
    if (inserted)
      data.class_names.push_back(e.label);
    Sample s;
    s.class_id = it->second;
    s.split = e.split;
    try {
      s.image = normalize_face(load_image(root / e.path), width, height);
    } catch (const Error &err) {
      rethrow_with_context(err, manifest.string() + " line " +
                                    std::to_string(e.line));
    }
    data.samples.push_back(std::move(s));
  }
  return data;
}

LabeledDataset load_manifest(const fs::path &manifest, int width, int height) {
  return load_manifest(manifest, manifest.parent_path(), width, height);
}

namespace {

// Low-frequency (row, col) cosine orders, excluding DC, by increasing sum.
std::vector<std::pair<int, int>> template_frequencies(int count, int rows,
                                                      int cols) {
  std::vector<std::pair<int, int>> out;
  for (int sum = 1; static_cast<int>(out.size()) < count; ++sum)
    for (int p = 0; p <= sum && static_cast<int>(out.size()) < count; ++p)
      if (p < rows && sum - p < cols)
        out.emplace_back(p, sum - p);
  return out;
}

} // namespace

LabeledDataset generate_synthetic(const SyntheticSpec &spec,
                                  std::uint64_t seed) {
  if (spec.num_classes < 1 || spec.train_per_class < 1 ||
      spec.test_per_class < 1)
    throw Error(Errc::InvalidSpec, "class and sample counts must be >= 1");
  if (spec.width < 8 || spec.height < 8)
    throw Error(Errc::InvalidSpec, "synthetic images must be at least 8x8");
  if (spec.num_classes >= spec.width * spec.height)
    throw Error(Errc::InvalidSpec, "too many classes for the image size");
  if (spec.contrast < 0 || spec.contrast > 127 || spec.noise < 0 ||
      spec.noise > 127)
    throw Error(Errc::InvalidSpec, "contrast and noise must lie in [0, 127]");

  const auto freqs =
      template_frequencies(spec.num_classes, spec.height, spec.width);
  std::vector<Eigen::MatrixXi> templates;
  for (const auto &[p, q] : freqs) {
    Eigen::MatrixXi t(spec.height, spec.width);
    for (int r = 0; r < spec.height; ++r) {
      const double cr = std::cos(std::numbers::pi * (r + 0.5) * p / spec.height);
      for (int c = 0; c < spec.width; ++c) {
        const double cc = std::cos(std::numbers::pi * (c + 0.5) * q / spec.width);
        t(r, c) = 128 + static_cast<int>(std::lround(spec.contrast * cr * cc));
      }
    }
    templates.push_back(std::move(t));
  }

  std::mt19937_64 rng(seed);
  const auto span = static_cast<std::uint64_t>(2 * spec.noise + 1);
  auto make = [&](int cls) {
    PixelMatrix px(spec.height, spec.width);
    for (int r = 0; r < spec.height; ++r)
      for (int c = 0; c < spec.width; ++c) {
        const int n = static_cast<int>(rng() % span) - spec.noise;
        px(r, c) = std::clamp(templates[cls](r, c) + n, 0, 255);
      }
    return GrayImage(std::move(px));
  };

  LabeledDataset data;
  for (int cls = 0; cls < spec.num_classes; ++cls) {
    data.class_names.push_back("class" + std::to_string(cls));
    for (int i = 0; i < spec.train_per_class; ++i)
      data.samples.push_back({make(cls), cls, Split::Train});
    for (int i = 0; i < spec.test_per_class; ++i)
      data.samples.push_back({make(cls), cls, Split::Test});
  }
  return data;
}

fs::path write_dataset(const LabeledDataset &data, const fs::path &dir) {
  data.validate();
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec)
    throw Error(Errc::IoError, "cannot create " + dir.string() + ": " + ec.message());

  const fs::path manifest_path = dir / "manifest.tsv";
  std::ofstream manifest(manifest_path, std::ios::binary);
  if (!manifest)
    throw Error(Errc::IoError, "cannot open " + manifest_path.string());
  manifest << "# path\tlabel\tsplit\n";

  std::vector<std::size_t> counter(data.class_names.size() * 2, 0);
  for (const Sample &s : data.samples) {
    const std::string &label = data.class_names[s.class_id];
    const std::size_t slot = s.class_id * 2 + (s.split == Split::Test ? 1 : 0);
    const fs::path rel = fs::path(split_name(s.split)) /
                         std::to_string(s.class_id) /
                         (std::to_string(counter[slot]++) + ".pgm");
    fs::create_directories(dir / rel.parent_path(), ec);
    if (ec)
      throw Error(Errc::IoError, "cannot create " + (dir / rel.parent_path()).string());
    save_pgm(s.image, dir / rel);
    manifest << rel.generic_string() << '\t' << label << '\t'
             << split_name(s.split) << '\n';
  }
  if (!manifest)
    throw Error(Errc::IoError, "write failed: " + manifest_path.string());
  return manifest_path;
}

} // namespace facerec
