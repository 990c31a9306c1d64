#ifndef FACEREC_EIGENSPACE_HPP
#define FACEREC_EIGENSPACE_HPP

#include "facerec/error.hpp"
#include "facerec/features.hpp"
#include "facerec/image.hpp"

#include <Eigen/Dense>
#include <Eigen/Jacobi>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <vector>

namespace facerec {

template <typename Scalar> struct SymmetricEigenResult {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> eigenvalues; ///< non-increasing
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> eigenvectors; ///< columns
  int sweeps = 0;
};

struct JacobiOptions {
  int max_sweeps = 100;
  /// Converged once the off-diagonal Frobenius norm drops below
  /// tolerance * ||A||_F.
  double tolerance = 1e-12;
  /// Allowed |a_ij - a_ji|, relative to max(1, max |a_ij|).
  double symmetry_tolerance = 1e-9;
};

/// Flips `v` so that its entry of largest magnitude is positive (first such
/// entry on ties).
template <typename Derived>
void canonicalize_sign(const Eigen::MatrixBase<Derived> &v_) {
  auto &v = const_cast<Eigen::MatrixBase<Derived> &>(v_);
  Eigen::Index arg = 0;
  v.cwiseAbs().maxCoeff(&arg);
  if (v(arg) < 0)
    v = -v;
}

/// Cyclic Jacobi eigendecomposition of a real symmetric matrix. Eigenpairs
/// come back sorted by non-increasing eigenvalue, each eigenvector sign-
/// canonicalized.
template <typename Derived>
SymmetricEigenResult<typename Derived::Scalar>
symmetric_eigen(const Eigen::MatrixBase<Derived> &matrix,
                const JacobiOptions &options = {}) {
  using Scalar = typename Derived::Scalar;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  if (matrix.rows() != matrix.cols())
    throw Error(Errc::NotSymmetric, "matrix is not square");
  const Eigen::Index n = matrix.rows();
  if (n == 0)
    throw Error(Errc::EmptyInput, "empty matrix");

  Matrix a = matrix;
  const Scalar scale = std::max(Scalar(1), a.cwiseAbs().maxCoeff());
  if (!a.allFinite())
    throw Error(Errc::NotSymmetric, "matrix has non-finite entries");
  if ((a - a.transpose()).cwiseAbs().maxCoeff() >
      Scalar(options.symmetry_tolerance) * scale)
    throw Error(Errc::NotSymmetric, "matrix is not symmetric");
  a = (a + a.transpose()) / Scalar(2);

  Matrix v = Matrix::Identity(n, n);
  const Scalar threshold = Scalar(options.tolerance) * a.norm();
  auto off_diagonal = [&] {
    Scalar sum(0);
    for (Eigen::Index q = 1; q < n; ++q)
      sum += a.col(q).head(q).squaredNorm();
    return std::sqrt(Scalar(2) * sum);
  };

  int sweep = 0;
  for (; off_diagonal() > threshold; ++sweep) {
    if (sweep == options.max_sweeps)
      throw Error(Errc::ConvergenceFailure,
                  "Jacobi did not converge in " +
                      std::to_string(options.max_sweeps) + " sweeps");
    for (Eigen::Index p = 0; p < n - 1; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (a(p, q) == Scalar(0))
          continue;
        Eigen::JacobiRotation<Scalar> rot;
        rot.makeJacobi(a, p, q);
        a.applyOnTheLeft(p, q, rot.adjoint());
        a.applyOnTheRight(p, q, rot);
        v.applyOnTheRight(p, q, rot);
        a(p, q) = a(q, p) = Scalar(0);
      }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index(0));
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
    return a(i, i) > a(j, j);
  });

  SymmetricEigenResult<Scalar> out;
  out.eigenvalues = Vector(n);
  out.eigenvectors = Matrix(n, n);
  out.sweeps = sweep;
  for (Eigen::Index k = 0; k < n; ++k) {
    out.eigenvalues(k) = a(order[k], order[k]);
    out.eigenvectors.col(k) = v.col(order[k]);
    canonicalize_sign(out.eigenvectors.col(k));
  }
  return out;
}

/// Trained PCA projection: mean plus orthonormal components (columns),
/// ordered by non-increasing eigenvalue of the unscaled scatter W W^T.
struct Eigenspace {
  Eigen::VectorXd mean;
  Eigen::MatrixXd components;
  Eigen::VectorXd eigenvalues;
  int training_count = 0;

  Eigen::Index dimension() const { return mean.size(); }
  Eigen::Index size() const { return components.cols(); }
};

struct PcaOptions {
  /// Keep at most this many components; nullopt keeps every nonzero one.
  std::optional<int> max_components;
  /// Eigenvalues at or below rank_tolerance * lambda_max count as zero.
  double rank_tolerance = 1e-10;
  JacobiOptions jacobi;
};

/// Stacks equal-length feature vectors as the columns of a matrix.
Eigen::MatrixXd stack_columns(const std::vector<FeatureVector> &samples);

Eigen::VectorXd compute_mean(const std::vector<FeatureVector> &samples);

/// Column i is samples[i] - mean.
Eigen::MatrixXd center(const std::vector<FeatureVector> &samples,
                       const Eigen::VectorXd &mean);

/// PCA of mean-centered data `centered` (N x M, one sample per column) via
/// the M x M matrix W^T W: each eigenvector v above the rank tolerance maps
/// to the component W v / ||W v||.
Eigenspace fit_pca(const Eigen::MatrixXd &centered, const Eigen::VectorXd &mean,
                   const PcaOptions &options = {});

/// Mean, centering and fit in one step.
Eigenspace fit_pca(const std::vector<FeatureVector> &samples,
                   const PcaOptions &options = {});

/// coords(j) = components.col(j) . (x - mean)
Eigen::VectorXd project(const Eigenspace &es, const Eigen::VectorXd &x);
inline Eigen::VectorXd project(const Eigenspace &es, const FeatureVector &x) {
  return project(es, x.values);
}

/// mean + sum_j coords(j) components.col(j)
Eigen::VectorXd back_project(const Eigenspace &es, const Eigen::VectorXd &coords);

/// Display gain for an eigenface: 3 sqrt(lambda), reduced if needed so the
/// component's largest entry spans at most half the 8-bit range.
double eigenface_display_scale(const Eigenspace &es, Eigen::Index index);

/// reshape(mean + scale * components.col(index)) clamped to [0, 255].
GrayImage reconstruct_eigenface(const Eigenspace &es, Eigen::Index index, int width,
                                int height, double scale);
GrayImage reconstruct_eigenface(const Eigenspace &es, Eigen::Index index, int width,
                                int height);

/// reshape(mean) clamped to [0, 255].
GrayImage mean_image(const Eigenspace &es, int width, int height);

} // namespace facerec

#endif // FACEREC_EIGENSPACE_HPP
