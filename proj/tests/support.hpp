#ifndef GESTUREKIT_TESTS_SUPPORT_HPP
#define GESTUREKIT_TESTS_SUPPORT_HPP

#include "gesturekit/trace.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <random>
#include <vector>

namespace gktest {

using gesturekit::FingerPath;
using gesturekit::GestureTrace;
using gesturekit::ResampledTrace;

// A trace already on a uniform grid.
inline ResampledTrace uniform_trace(std::vector<FingerPath> fingers, double rate_hz = 60.0, int trial = 1,
                                    std::string id = "g") {
  ResampledTrace t;
  t.gesture_id = id;
  t.subject_id = "s";
  t.trial_index = trial;
  t.rate_hz = rate_hz;
  t.fingers = std::move(fingers);
  return t;
}

// Raw trace sampled at the given times from per-finger paths (rows match times).
inline GestureTrace raw_trace(const std::vector<double>& times_ms, const std::vector<FingerPath>& fingers,
                              double rate_hz = 200.0, int width = 4000, int height = 4000) {
  GestureTrace t;
  t.gesture_id = "g";
  t.subject_id = "s";
  t.screen = {width, height};
  t.nominal_rate_hz = rate_hz;
  for (const auto& f : fingers) {
    gesturekit::FingerStream s;
    for (std::size_t i = 0; i < times_ms.size(); ++i) {
      s.samples.push_back({times_ms[i], f(static_cast<Eigen::Index>(i), 0), f(static_cast<Eigen::Index>(i), 1)});
    }
    t.fingers.push_back(std::move(s));
  }
  return t;
}

inline FingerPath white_noise_path(std::mt19937_64& rng, Eigen::Index n, double sigma = 10.0,
                                   double cx = 500.0, double cy = 500.0) {
  std::normal_distribution<double> g(0.0, sigma);
  FingerPath p(n, 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    p(i, 0) = cx + g(rng);
    p(i, 1) = cy + g(rng);
  }
  return p;
}

inline FingerPath random_stroke(std::mt19937_64& rng, Eigen::Index n, double scale = 300.0) {
  std::uniform_real_distribution<double> u(0.0, scale);
  FingerPath p(n, 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    p(i, 0) = u(rng) + 100.0;
    p(i, 1) = u(rng) + 100.0;
  }
  return p;
}

inline FingerPath transformed(const FingerPath& p, double scale, double angle, double dx, double dy) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  FingerPath out(p.rows(), 2);
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    out(i, 0) = scale * (c * p(i, 0) - s * p(i, 1)) + dx;
    out(i, 1) = scale * (s * p(i, 0) + c * p(i, 1)) + dy;
  }
  return out;
}

inline ResampledTrace transformed(const ResampledTrace& t, double scale, double angle, double dx, double dy) {
  ResampledTrace out = t;
  for (auto& f : out.fingers) f = transformed(f, scale, angle, dx, dy);
  return out;
}

inline double relative_diff(double a, double b) {
  const double denom = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) / denom;
}

}  // namespace gktest

#endif  // GESTUREKIT_TESTS_SUPPORT_HPP
