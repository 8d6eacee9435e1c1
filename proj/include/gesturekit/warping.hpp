#ifndef GESTUREKIT_WARPING_HPP
#define GESTUREKIT_WARPING_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

namespace gesturekit {

/// Monotone frame correspondence between two sequences.
struct Alignment {
  std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;
  /// true where the pair repeats the previous pair's row or column index.
  std::vector<bool> duplicate_mask;
  double cost = 0.0;

  std::size_t unique_pairs() const {
    std::size_t n = 0;
    for (bool dup : duplicate_mask) n += dup ? 0 : 1;
    return n;
  }
};

/// Dynamic time warping with Euclidean frame cost over rows, steps
/// (1,0), (0,1), (1,1), anchored at both ends. Ties prefer the diagonal.
template <typename DerivedA, typename DerivedB>
Alignment align(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  const Eigen::Index n = a.rows();
  const Eigen::Index m = b.rows();
  if (n < 1 || m < 1 || a.cols() != b.cols() || a.cols() < 1) {
    throw std::invalid_argument("align: empty sequences or mismatched dimensions");
  }
  const Scalar inf = std::numeric_limits<Scalar>::infinity();
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> acc(n, m);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      const Scalar c = (a.row(i) - b.row(j)).norm();
      if (i == 0 && j == 0) {
        acc(i, j) = c;
        continue;
      }
      Scalar best = inf;
      if (i > 0 && j > 0) best = acc(i - 1, j - 1);
      if (i > 0) best = std::min(best, acc(i - 1, j));
      if (j > 0) best = std::min(best, acc(i, j - 1));
      acc(i, j) = c + best;
    }
  }

  Alignment out;
  out.cost = static_cast<double>(acc(n - 1, m - 1));
  Eigen::Index i = n - 1;
  Eigen::Index j = m - 1;
  out.pairs.emplace_back(i, j);
  while (i > 0 || j > 0) {
    if (i == 0) {
      --j;
    } else if (j == 0) {
      --i;
    } else {
      const Scalar diag = acc(i - 1, j - 1);
      const Scalar up = acc(i - 1, j);
      const Scalar left = acc(i, j - 1);
      if (diag <= up && diag <= left) {
        --i;
        --j;
      } else if (up <= left) {
        --i;
      } else {
        --j;
      }
    }
    out.pairs.emplace_back(i, j);
  }
  std::reverse(out.pairs.begin(), out.pairs.end());

  out.duplicate_mask.assign(out.pairs.size(), false);
  for (std::size_t k = 1; k < out.pairs.size(); ++k) {
    out.duplicate_mask[k] = out.pairs[k].first == out.pairs[k - 1].first ||
                            out.pairs[k].second == out.pairs[k - 1].second;
  }
  return out;
}

/// Gaussian smoothing along rows with edge clamping; sigma in frames.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> smooth_rows(
    const Eigen::MatrixBase<Derived>& x, double sigma) {
  using Scalar = typename Derived::Scalar;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  if (sigma <= 0.0) {
    return x;
  }
  const auto radius = static_cast<Eigen::Index>(std::ceil(4.0 * sigma));
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> w(2 * radius + 1);
  for (Eigen::Index k = -radius; k <= radius; ++k) {
    w(k + radius) = static_cast<Scalar>(std::exp(-0.5 * (k / sigma) * (k / sigma)));
  }
  w /= w.sum();
  const Eigen::Index n = x.rows();
  Matrix out = Matrix::Zero(n, x.cols());
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index k = -radius; k <= radius; ++k) {
      const Eigen::Index src = std::clamp<Eigen::Index>(i + k, 0, n - 1);
      out.row(i) += w(k + radius) * x.row(src);
    }
  }
  return out;
}

}  // namespace gesturekit

#endif  // GESTUREKIT_WARPING_HPP
