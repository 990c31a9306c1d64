#ifndef FACEREC_DATASET_HPP
#define FACEREC_DATASET_HPP

#include "facerec/image.hpp"

#include <cstdint>
#include <filesystem>
#include <istream>
#include <string>
#include <vector>

namespace facerec {

enum class Split { Train, Test };

std::string_view split_name(Split s);

struct Sample {
  GrayImage image;
  int class_id = 0;
  Split split = Split::Train;
};

struct LabeledDataset {
  std::vector<Sample> samples;
  std::vector<std::string> class_names;

  int num_classes() const { return static_cast<int>(class_names.size()); }
  /// Samples of one split, in original order, with the same class table.
  LabeledDataset subset(Split split) const;
  std::vector<std::size_t> class_counts() const;
  /// Throws InvalidSpec when a class id is out of range or names repeat.
  void validate() const;
};

struct ManifestEntry {
  std::string path;
  std::string label;
  Split split = Split::Train;
  int line = 0;
};

/// Parses `path<TAB>label<TAB>split` lines. Blank lines and lines starting
/// with '#' are skipped. Throws ManifestParseError naming the line.
std::vector<ManifestEntry> parse_manifest(std::istream &in);

/// Loads every manifest entry (paths relative to `root`) and resizes it to
/// `width` x `height`. Class ids follow first appearance of each label.
LabeledDataset load_manifest(const std::filesystem::path &manifest,
                             const std::filesystem::path &root, int width,
                             int height);

/// Same, with paths resolved against the manifest's own directory.
LabeledDataset load_manifest(const std::filesystem::path &manifest, int width,
                             int height);

struct SyntheticSpec {
  int num_classes = 2;
  int train_per_class = 100;
  int test_per_class = 50;
  int width = 128;
  int height = 128;
  /// Peak deviation of the class template from mid-gray.
  int contrast = 3;
  /// Per-pixel noise is uniform on the integers [-noise, noise].
  int noise = 48;
};

/// Each class is mid-gray plus one low-frequency cosine pattern
/// cos(pi (r + 1/2) p / H) cos(pi (c + 1/2) q / W), with (p, q) distinct per
/// class, plus integer noise from a seeded mt19937_64. Per class, training
/// samples precede test samples.
LabeledDataset generate_synthetic(const SyntheticSpec &spec,
                                  std::uint64_t seed);

/// Writes images as `<split>/<class id>/<n>.pgm` under `dir` plus a
/// `manifest.tsv` referencing them; returns the manifest path.
std::filesystem::path write_dataset(const LabeledDataset &data,
                                    const std::filesystem::path &dir);

} // namespace facerec

#endif // FACEREC_DATASET_HPP
