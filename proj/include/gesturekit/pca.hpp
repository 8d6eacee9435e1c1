#ifndef GESTUREKIT_PCA_HPP
#define GESTUREKIT_PCA_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <stdexcept>

namespace gesturekit {

template <typename Scalar>
struct PcaBasis {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  Vector mean_vector;
  /// retained_k x d, orthonormal rows ordered by decreasing variance.
  Matrix components;
  Eigen::Index retained_k = 0;
  /// Mean squared reconstruction error per row with retained_k components.
  Scalar reprojection_mse = 0;
  Scalar total_variance = 0;
  /// Covariance spectrum, descending.
  Vector eigenvalues;

  template <typename Derived>
  Matrix project(const Eigen::MatrixBase<Derived>& rows) const {
    return (rows.rowwise() - mean_vector.transpose()) * components.transpose();
  }
};

/// PCA on the row concatenation of a and b. Keeps the fewest components whose
/// reprojection MSE is within cutoff_fraction of the total variance (at least one).
template <typename DerivedA, typename DerivedB>
PcaBasis<typename DerivedA::Scalar> fit_pca(const Eigen::MatrixBase<DerivedA>& a,
                                            const Eigen::MatrixBase<DerivedB>& b,
                                            typename DerivedA::Scalar cutoff_fraction) {
  using Scalar = typename DerivedA::Scalar;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  if (a.cols() != b.cols()) {
    throw std::invalid_argument("fit_pca: feature dimensions differ");
  }
  if (!(cutoff_fraction > Scalar(0) && cutoff_fraction <= Scalar(1))) {
    throw std::invalid_argument("fit_pca: cutoff fraction must lie in (0, 1]");
  }
  const Eigen::Index d = a.cols();
  Matrix joint(a.rows() + b.rows(), d);
  joint << a, b;

  PcaBasis<Scalar> basis;
  basis.mean_vector = joint.colwise().mean().transpose();
  const Matrix centered = joint.rowwise() - basis.mean_vector.transpose();
  const Matrix cov = (centered.transpose() * centered) / Scalar(joint.rows());

  Eigen::SelfAdjointEigenSolver<Matrix> solver(cov);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("fit_pca: eigen decomposition failed");
  }
  // Eigen returns ascending order.
  const auto values = solver.eigenvalues().reverse().cwiseMax(Scalar(0)).eval();
  const Matrix vectors = solver.eigenvectors().rowwise().reverse();
  basis.eigenvalues = values;
  basis.total_variance = values.sum();
  if (!(basis.total_variance > Scalar(0))) {
    throw std::domain_error("fit_pca: zero total variance");
  }

  Eigen::Index k = 1;
  Scalar residual = values.tail(d - 1).sum();
  while (k < d && residual > cutoff_fraction * basis.total_variance) {
    residual -= values(k);
    ++k;
  }
  basis.retained_k = k;
  basis.reprojection_mse = std::max(Scalar(0), values.tail(d - k).sum());
  basis.components = vectors.leftCols(k).transpose();
  return basis;
}

}  // namespace gesturekit

#endif  // GESTUREKIT_PCA_HPP
