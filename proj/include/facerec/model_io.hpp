#ifndef FACEREC_MODEL_IO_HPP
#define FACEREC_MODEL_IO_HPP

#include "facerec/classifier.hpp"

#include <filesystem>
#include <istream>
#include <ostream>

namespace facerec {

inline constexpr int kModelFormatVersion = 1;

// Model file layout: a text header
//
//   EIGC <version>
//   feature <raw|dct> <n_coeffs>
//   size <width> <height>
//   classes <C>
//   <one class name per line>
//   dims <N> <K> <M>
//   labels <M training labels>
//   data
//
// followed by little-endian IEEE-754 doubles: mean (N), components (N x K,
// column-major), eigenvalues (K), projected training points (K x M,
// column-major), centroids (K x C, column-major).
void save_model(const TrainedModel &model, std::ostream &out);
void save_model(const TrainedModel &model, const std::filesystem::path &path);

/// Throws ModelFormatError on a bad magic, an unknown version, or a
/// truncated/inconsistent payload.
TrainedModel load_model(std::istream &in);
TrainedModel load_model(const std::filesystem::path &path);

} // namespace facerec

#endif // FACEREC_MODEL_IO_HPP
