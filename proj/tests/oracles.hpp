#ifndef GESTUREKIT_TESTS_ORACLES_HPP
#define GESTUREKIT_TESTS_ORACLES_HPP

// Reference implementations written without the library's kernels: plain loops,
// long double accumulation, brute force where the size allows it.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

namespace oracle {

using Series = std::vector<double>;
using Rows = std::vector<std::vector<double>>;

// AR(2) by the 3x3 normal equations and Cramer's rule.
struct Ar2 {
  std::array<double, 3> beta{};
  Series residuals;
};

inline Ar2 ar2_normal_equations(const Series& x) {
  long double g[3][3] = {};
  long double h[3] = {};
  for (std::size_t t = 2; t < x.size(); ++t) {
    const long double row[3] = {1.0L, x[t - 1], x[t - 2]};
    for (int i = 0; i < 3; ++i) {
      h[i] += row[i] * x[t];
      for (int j = 0; j < 3; ++j) g[i][j] += row[i] * row[j];
    }
  }
  auto det3 = [](long double m[3][3]) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  };
  const long double d = det3(g);
  Ar2 out;
  for (int c = 0; c < 3; ++c) {
    long double m[3][3];
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) m[i][j] = j == c ? h[i] : g[i][j];
    }
    out.beta[static_cast<std::size_t>(c)] = static_cast<double>(det3(m) / d);
  }
  for (std::size_t t = 2; t < x.size(); ++t) {
    out.residuals.push_back(x[t] - out.beta[0] - out.beta[1] * x[t - 1] - out.beta[2] * x[t - 2]);
  }
  return out;
}

// Cyclic Jacobi eigenvalues of a symmetric matrix, descending.
inline Series jacobi_eigenvalues(Rows a) {
  const std::size_t n = a.size();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
    }
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p];
          const double akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k];
          const double aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
      }
    }
  }
  Series values;
  for (std::size_t i = 0; i < n; ++i) values.push_back(a[i][i]);
  std::sort(values.begin(), values.end(), std::greater<>());
  return values;
}

// Population covariance of stacked rows.
inline Rows covariance(const Rows& rows) {
  const std::size_t d = rows.front().size();
  std::vector<long double> mean(d, 0.0L);
  for (const auto& r : rows) {
    for (std::size_t j = 0; j < d; ++j) mean[j] += r[j];
  }
  for (auto& m : mean) m /= static_cast<long double>(rows.size());
  Rows cov(d, Series(d, 0.0));
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      long double s = 0.0L;
      for (const auto& r : rows) s += (r[i] - mean[i]) * (r[j] - mean[j]);
      cov[i][j] = static_cast<double>(s / static_cast<long double>(rows.size()));
    }
  }
  return cov;
}

// Smallest k whose discarded eigenvalue mass is within cutoff of the total.
inline std::size_t minimal_k(const Series& eigenvalues, double cutoff) {
  double total = 0.0;
  for (double v : eigenvalues) total += std::max(v, 0.0);
  for (std::size_t k = 1; k <= eigenvalues.size(); ++k) {
    double rest = 0.0;
    for (std::size_t i = k; i < eigenvalues.size(); ++i) rest += std::max(eigenvalues[i], 0.0);
    if (rest <= cutoff * total) return k;
  }
  return eigenvalues.size();
}

// Minimum DTW path cost by depth-first enumeration of every monotone path
// with steps (1,0), (0,1), (1,1); partial paths costlier than the best
// complete path are cut since costs are non-negative.
inline double dtw_exhaustive(const Rows& a, const Rows& b) {
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  auto cost = [&](std::size_t i, std::size_t j) {
    long double s = 0.0L;
    for (std::size_t k = 0; k < a[i].size(); ++k) {
      const long double d = a[i][k] - b[j][k];
      s += d * d;
    }
    return static_cast<double>(std::sqrt(s));
  };
  double best = std::numeric_limits<double>::infinity();
  std::function<void(std::size_t, std::size_t, double)> walk = [&](std::size_t i, std::size_t j, double acc) {
    acc += cost(i, j);
    if (acc >= best) return;
    if (i == n - 1 && j == m - 1) {
      best = acc;
      return;
    }
    if (i + 1 < n && j + 1 < m) walk(i + 1, j + 1, acc);
    if (i + 1 < n) walk(i + 1, j, acc);
    if (j + 1 < m) walk(i, j + 1, acc);
  };
  walk(0, 0, 0.0);
  return best;
}

inline double pearson(const Series& x, const Series& y) {
  long double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= x.size();
  my /= y.size();
  long double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return static_cast<double>(sxy / std::sqrt(sxx * syy));
}

// Bias-corrected Gaussian mutual information in bits for correlation rho over n samples.
inline double gaussian_bits(double rho, double n) {
  return -(n / 2.0) * std::log2(1.0 - rho * rho) - std::log2(std::exp(1.0)) / 2.0;
}

// Protractor similarity by rotating `a` over a fine angle grid; inputs are
// centred, unit-norm point lists.
inline double protractor_grid(const Rows& a, const Rows& b, double step = 1e-3) {
  double best = -1.0;
  const double two_pi = 2.0 * std::acos(-1.0);
  for (double th = 0.0; th < two_pi; th += step) {
    const double c = std::cos(th);
    const double s = std::sin(th);
    double dot = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      dot += (c * a[i][0] - s * a[i][1]) * b[i][0] + (s * a[i][0] + c * a[i][1]) * b[i][1];
    }
    best = std::max(best, dot);
  }
  return 1.0 / std::acos(std::min(best, 1.0));
}

// Fractions of genuine and impostor scores at or above the threshold.
inline std::pair<double, double> confusion_rates(const Series& genuine, const Series& impostor, double threshold) {
  std::size_t tp = 0;
  std::size_t fp = 0;
  for (double g : genuine) tp += g >= threshold ? 1 : 0;
  for (double s : impostor) fp += s >= threshold ? 1 : 0;
  return {static_cast<double>(tp) / genuine.size(), static_cast<double>(fp) / impostor.size()};
}

}  // namespace oracle

#endif  // GESTUREKIT_TESTS_ORACLES_HPP
