#ifndef GESTUREKIT_AUTOREGRESSIVE_HPP
#define GESTUREKIT_AUTOREGRESSIVE_HPP

#include <Eigen/Dense>

#include <stdexcept>

namespace gesturekit {

/// Least-squares AR(2) fit x_t = beta0 + beta1 x_{t-1} + beta2 x_{t-2} + e_t.
template <typename Scalar>
struct ArFit {
  Scalar beta0 = 0;
  Scalar beta1 = 0;
  Scalar beta2 = 0;
  /// residuals(i) belongs to frame i + 2; the first two frames have none.
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> residuals;
  /// Design matrix was rank deficient (constant or constant-velocity series).
  bool degenerate = false;
};

/// Rows [1, x_{t-1}, x_{t-2}] for t = 2 .. n-1.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 3> ar2_design(
    const Eigen::MatrixBase<Derived>& series) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = series.size();
  Eigen::Matrix<Scalar, Eigen::Dynamic, 3> design(n - 2, 3);
  design.col(0).setOnes();
  design.col(1) = series.segment(1, n - 2);
  design.col(2) = series.head(n - 2);
  return design;
}

template <typename Derived>
ArFit<typename Derived::Scalar> fit_ar2(const Eigen::MatrixBase<Derived>& series) {
  using Scalar = typename Derived::Scalar;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  static_assert(Derived::IsVectorAtCompileTime || Derived::ColsAtCompileTime == Eigen::Dynamic,
                "fit_ar2 expects a vector");
  const Eigen::Index n = series.size();
  if (n < 8) {
    throw std::invalid_argument("fit_ar2 needs at least 8 samples");
  }
  const Vector x = series.derived();
  const auto design = ar2_design(x);
  const Vector target = x.tail(n - 2);

  // Column scaling keeps the rank decision independent of coordinate units.
  Eigen::Matrix<Scalar, 3, 1> scale = design.colwise().norm().transpose();
  for (int c = 0; c < 3; ++c) {
    if (scale(c) == Scalar(0)) scale(c) = Scalar(1);
  }
  const Eigen::Matrix<Scalar, Eigen::Dynamic, 3> scaled = design * scale.cwiseInverse().asDiagonal();
  Eigen::CompleteOrthogonalDecomposition<Eigen::Matrix<Scalar, Eigen::Dynamic, 3>> cod;
  cod.setThreshold(Scalar(1e-10));
  cod.compute(scaled);
  const Eigen::Matrix<Scalar, 3, 1> beta = cod.solve(target).cwiseQuotient(scale);

  ArFit<Scalar> fit;
  fit.beta0 = beta(0);
  fit.beta1 = beta(1);
  fit.beta2 = beta(2);
  fit.residuals = target - design * beta;
  fit.degenerate = cod.rank() < 3;
  return fit;
}

}  // namespace gesturekit

#endif  // GESTUREKIT_AUTOREGRESSIVE_HPP
