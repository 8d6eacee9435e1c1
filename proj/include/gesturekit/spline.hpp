#ifndef GESTUREKIT_SPLINE_HPP
#define GESTUREKIT_SPLINE_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <stdexcept>

namespace gesturekit {

/// Natural cubic spline through (knots[i], values(i, c)) for every column c.
///
/// Second derivatives vanish at both ends. Outside the knot range the spline
/// continues linearly with its end slope, which is the natural extension of
/// the zero-curvature boundary.
template <typename Scalar>
class CubicSpline {
public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Row = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;

  template <typename KnotDerived, typename ValueDerived>
  CubicSpline(const Eigen::MatrixBase<KnotDerived>& knots,
              const Eigen::MatrixBase<ValueDerived>& values)
      : knots_(knots), values_(values) {
    const Eigen::Index n = knots_.size();
    if (n < 3) {
      throw std::invalid_argument("cubic spline needs at least 3 knots");
    }
    if (values_.rows() != n) {
      throw std::invalid_argument("cubic spline: knot/value length mismatch");
    }
    for (Eigen::Index i = 1; i < n; ++i) {
      if (!(knots_(i) > knots_(i - 1))) {
        throw std::invalid_argument("cubic spline knots must be strictly increasing");
      }
    }
    solve_second_derivatives();
  }

  Eigen::Index columns() const { return values_.cols(); }
  Scalar front() const { return knots_(0); }
  Scalar back() const { return knots_(knots_.size() - 1); }

  Row operator()(Scalar t) const {
    const Eigen::Index n = knots_.size();
    if (t <= knots_(0)) {
      return values_.row(0) + (t - knots_(0)) * slope(0, Scalar(0));
    }
    if (t >= knots_(n - 1)) {
      return values_.row(n - 1) + (t - knots_(n - 1)) * slope(n - 2, Scalar(1));
    }
    const auto* begin = knots_.data();
    const auto* it = std::upper_bound(begin, begin + n, t);
    const Eigen::Index i = static_cast<Eigen::Index>(it - begin) - 1;
    const Scalar h = knots_(i + 1) - knots_(i);
    const Scalar a = (knots_(i + 1) - t) / h;
    const Scalar b = (t - knots_(i)) / h;
    return a * values_.row(i) + b * values_.row(i + 1) +
           ((a * a * a - a) * second_.row(i) + (b * b * b - b) * second_.row(i + 1)) * (h * h) /
               Scalar(6);
  }

  template <typename Derived>
  Matrix evaluate(const Eigen::MatrixBase<Derived>& ts) const {
    Matrix out(ts.size(), values_.cols());
    for (Eigen::Index i = 0; i < ts.size(); ++i) {
      out.row(i) = (*this)(ts(i));
    }
    return out;
  }

private:
  // First derivative on interval i at fractional position u in {0, 1}.
  Row slope(Eigen::Index i, Scalar u) const {
    const Scalar h = knots_(i + 1) - knots_(i);
    const Row secant = (values_.row(i + 1) - values_.row(i)) / h;
    if (u == Scalar(0)) {
      return secant - h * (Scalar(2) * second_.row(i) + second_.row(i + 1)) / Scalar(6);
    }
    return secant + h * (second_.row(i) + Scalar(2) * second_.row(i + 1)) / Scalar(6);
  }

  // Tridiagonal system for the interior second derivatives (Thomas algorithm).
  void solve_second_derivatives() {
    const Eigen::Index n = knots_.size();
    const Eigen::Index cols = values_.cols();
    second_ = Matrix::Zero(n, cols);
    const Eigen::Index m = n - 2;
    Vector diag(m), upper(m);
    Matrix rhs(m, cols);
    for (Eigen::Index k = 0; k < m; ++k) {
      const Eigen::Index i = k + 1;
      const Scalar h0 = knots_(i) - knots_(i - 1);
      const Scalar h1 = knots_(i + 1) - knots_(i);
      diag(k) = (h0 + h1) / Scalar(3);
      upper(k) = h1 / Scalar(6);
      rhs.row(k) = (values_.row(i + 1) - values_.row(i)) / h1 -
                   (values_.row(i) - values_.row(i - 1)) / h0;
    }
    for (Eigen::Index k = 1; k < m; ++k) {
      const Scalar lower = knots_(k + 1) - knots_(k);  // h0 of row k, divided below
      const Scalar w = (lower / Scalar(6)) / diag(k - 1);
      diag(k) -= w * upper(k - 1);
      rhs.row(k) -= w * rhs.row(k - 1);
    }
    for (Eigen::Index k = m - 1; k >= 0; --k) {
      Row r = rhs.row(k);
      if (k + 1 < m) {
        r -= upper(k) * second_.row(k + 2);
      }
      second_.row(k + 1) = r / diag(k);
    }
  }

  Vector knots_;
  Matrix values_;
  Matrix second_;
};

}  // namespace gesturekit

#endif  // GESTUREKIT_SPLINE_HPP
