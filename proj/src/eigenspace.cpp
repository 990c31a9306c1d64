#include "facerec/eigenspace.hpp"

#include <string>

namespace facerec {

namespace {

void require_same_lengths(const std::vector<FeatureVector> &samples) {
  if (samples.empty())
    throw Error(Errc::EmptyInput, "no samples");
  const Eigen::Index n = samples.front().values.size();
  for (std::size_t i = 1; i < samples.size(); ++i)
    if (samples[i].values.size() != n)
      throw Error(Errc::DimensionMismatch,
                  "sample " + std::to_string(i) + " has length " +
                      std::to_string(samples[i].values.size()) + ", expected " +
                      std::to_string(n));
}

GrayImage reshape_clamped(const Eigen::VectorXd &v, int width, int height) {
  if (static_cast<Eigen::Index>(width) * height != v.size())
    throw Error(Errc::DimensionMismatch,
                std::to_string(width) + "x" + std::to_string(height) +
                    " does not match feature dimension " + std::to_string(v.size()));
  PixelMatrix px = Eigen::Map<const PixelMatrix>(v.data(), height, width);
  return GrayImage(px.cwiseMax(0.0).cwiseMin(255.0));
}

} // namespace

Eigen::MatrixXd stack_columns(const std::vector<FeatureVector> &samples) {
  require_same_lengths(samples);
  Eigen::MatrixXd out(samples.front().values.size(),
                      static_cast<Eigen::Index>(samples.size()));
  for (std::size_t i = 0; i < samples.size(); ++i)
    out.col(static_cast<Eigen::Index>(i)) = samples[i].values;
  return out;
}

Eigen::VectorXd compute_mean(const std::vector<FeatureVector> &samples) {
  require_same_lengths(samples);
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(samples.front().values.size());
  for (const FeatureVector &s : samples)
    sum += s.values;
  return sum / static_cast<double>(samples.size());
}

Eigen::MatrixXd center(const std::vector<FeatureVector> &samples,
                       const Eigen::VectorXd &mean) {
  Eigen::MatrixXd w = stack_columns(samples);
  if (w.rows() != mean.size())
    throw Error(Errc::DimensionMismatch, "mean length " + std::to_string(mean.size()) +
                                             " vs sample length " +
                                             std::to_string(w.rows()));
  w.colwise() -= mean;
  return w;
}

Eigenspace fit_pca(const Eigen::MatrixXd &centered, const Eigen::VectorXd &mean,
                   const PcaOptions &options) {
  if (centered.rows() != mean.size())
    throw Error(Errc::DimensionMismatch, "mean length " + std::to_string(mean.size()) +
                                             " vs data rows " +
                                             std::to_string(centered.rows()));
  if (centered.cols() < 2)
    throw Error(Errc::DegenerateData, "PCA needs at least two samples");
  if (options.max_components && *options.max_components < 1)
    throw Error(Errc::InvalidSpec, "max_components must be >= 1");

  Eigen::MatrixXd gram = centered.transpose() * centered;
  gram = (0.5 * (gram + gram.transpose())).eval();
  const auto eig = symmetric_eigen(gram, options.jacobi);

  const double lambda_max = eig.eigenvalues(0);
  if (!(lambda_max > 0.0))
    throw Error(Errc::DegenerateData, "all samples are identical");
  const double cutoff = options.rank_tolerance * lambda_max;
  Eigen::Index keep = 0;
  while (keep < eig.eigenvalues.size() && eig.eigenvalues(keep) > cutoff)
    ++keep;
  if (options.max_components)
    keep = std::min<Eigen::Index>(keep, *options.max_components);

  Eigenspace es;
  es.mean = mean;
  es.training_count = static_cast<int>(centered.cols());
  es.components.resize(centered.rows(), keep);
  es.eigenvalues.resize(keep);
  for (Eigen::Index j = 0; j < keep; ++j) {
    Eigen::VectorXd u = centered * eig.eigenvectors.col(j);
    u /= u.norm();
    canonicalize_sign(u);
    es.components.col(j) = u;
    es.eigenvalues(j) = std::max(0.0, eig.eigenvalues(j));
  }
  return es;
}

Eigenspace fit_pca(const std::vector<FeatureVector> &samples,
                   const PcaOptions &options) {
  const Eigen::VectorXd mean = compute_mean(samples);
  return fit_pca(center(samples, mean), mean, options);
}

Eigen::VectorXd project(const Eigenspace &es, const Eigen::VectorXd &x) {
  if (x.size() != es.dimension())
    throw Error(Errc::DimensionMismatch, "vector length " + std::to_string(x.size()) +
                                             ", eigenspace dimension " +
                                             std::to_string(es.dimension()));
  return es.components.transpose() * (x - es.mean);
}

Eigen::VectorXd back_project(const Eigenspace &es, const Eigen::VectorXd &coords) {
  if (coords.size() != es.size())
    throw Error(Errc::DimensionMismatch, "coordinate count " +
                                             std::to_string(coords.size()) +
                                             ", eigenspace size " +
                                             std::to_string(es.size()));
  return es.mean + es.components * coords;
}

double eigenface_display_scale(const Eigenspace &es, Eigen::Index index) {
  if (index < 0 || index >= es.size())
    throw Error(Errc::IndexOutOfRange, "eigenface " + std::to_string(index) +
                                           " of " + std::to_string(es.size()));
  constexpr double half_range = 127.5;
  const double peak = es.components.col(index).cwiseAbs().maxCoeff();
  double scale = 3.0 * std::sqrt(es.eigenvalues(index));
  if (peak > 0.0 && scale * peak > half_range)
    scale = half_range / peak;
  return scale;
}

GrayImage reconstruct_eigenface(const Eigenspace &es, Eigen::Index index, int width,
                                int height, double scale) {
  if (index < 0 || index >= es.size())
    throw Error(Errc::IndexOutOfRange, "eigenface " + std::to_string(index) +
                                           " of " + std::to_string(es.size()));
  return reshape_clamped(es.mean + scale * es.components.col(index), width, height);
}

GrayImage reconstruct_eigenface(const Eigenspace &es, Eigen::Index index, int width,
                                int height) {
  return reconstruct_eigenface(es, index, width, height,
                               eigenface_display_scale(es, index));
}

GrayImage mean_image(const Eigenspace &es, int width, int height) {
  return reshape_clamped(es.mean, width, height);
}

} // namespace facerec
