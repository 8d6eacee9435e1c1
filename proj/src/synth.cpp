#include "gesturekit/synth.hpp"

#include "gesturekit/spline.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gesturekit {

namespace {

std::uint32_t lo32(std::uint64_t v) { return static_cast<std::uint32_t>(v & 0xffffffffu); }
std::uint32_t hi32(std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); }

double min_jerk(double tau) { return tau * tau * tau * (10.0 + tau * (-15.0 + 6.0 * tau)); }

// Point at fraction s of the total arc length of a polyline.
Eigen::MatrixX2d polyline_at(const Eigen::MatrixX2d& vertices, const Eigen::VectorXd& progress) {
  const Eigen::Index n = vertices.rows();
  Eigen::VectorXd arc(n);
  arc(0) = 0.0;
  for (Eigen::Index i = 1; i < n; ++i) {
    arc(i) = arc(i - 1) + (vertices.row(i) - vertices.row(i - 1)).norm();
  }
  const double length = arc(n - 1);
  Eigen::MatrixX2d out(progress.size(), 2);
  for (Eigen::Index k = 0; k < progress.size(); ++k) {
    const double d = std::clamp(progress(k), 0.0, 1.0) * length;
    const auto* it = std::upper_bound(arc.data(), arc.data() + n, d);
    Eigen::Index seg = std::clamp<Eigen::Index>(static_cast<Eigen::Index>(it - arc.data()), 1, n - 1);
    const double span = arc(seg) - arc(seg - 1);
    const double u = span > 0.0 ? (d - arc(seg - 1)) / span : 0.0;
    out.row(k) = (1.0 - u) * vertices.row(seg - 1) + u * vertices.row(seg);
  }
  return out;
}

Eigen::MatrixX2d signature_vertices(const GestureFamily& family, std::uint64_t shape_seed, int extra_points = 0) {
  Rng rng(shape_seed, 0x5167, 0);
  const double cx = family.screen.width_px / 2.0;
  const double cy = family.screen.height_px / 2.0;
  const double s = family.scale_px;
  // fewer, gentler extrema than the zigzag family
  const int m = 5 + static_cast<int>(rng.next() % 3) + extra_points;
  Eigen::VectorXd knots = Eigen::VectorXd::LinSpaced(m, 0.0, 1.0);
  Eigen::MatrixX2d control(m, 2);
  for (int i = 0; i < m; ++i) {
    const double jitter = s / (4.0 * m);
    control(i, 0) = cx - s / 2.0 + s * i / (m - 1.0) + rng.uniform(-jitter, jitter);
    const double sign = (i % 2 == 0) ? -1.0 : 1.0;
    control(i, 1) = cy + sign * rng.uniform(0.1, 0.4) * s;
  }
  const CubicSpline<double> spline(knots, control);
  return spline.evaluate(Eigen::VectorXd::LinSpaced(2000, 0.0, 1.0));
}

Eigen::MatrixX2d base_path(const GestureFamily& family, const Eigen::VectorXd& progress) {
  const double cx = family.screen.width_px / 2.0;
  const double cy = family.screen.height_px / 2.0;
  const double s = family.scale_px;
  switch (family.kind) {
    case PathKind::Line: {
      Eigen::MatrixX2d v(2, 2);
      v << cx - s / 2.0, cy, cx + s / 2.0, cy;
      return polyline_at(v, progress);
    }
    case PathKind::Circle: {
      Eigen::MatrixX2d out(progress.size(), 2);
      const Eigen::ArrayXd angle = 2.0 * std::numbers::pi * progress.array();
      out.col(0) = cx + s / 2.0 * angle.cos();
      out.col(1) = cy + s / 2.0 * angle.sin();
      return out;
    }
    case PathKind::Zigzag: {
      if (family.turns < 1) {
        throw std::invalid_argument("zigzag needs at least one turn");
      }
      const int n = family.turns + 2;
      Eigen::MatrixX2d v(n, 2);
      for (int i = 0; i < n; ++i) {
        v(i, 0) = cx - s / 2.0 + s * i / (n - 1.0);
        v(i, 1) = cy + ((i % 2 == 0) ? -s / 2.0 : s / 2.0);
      }
      return polyline_at(v, progress);
    }
    case PathKind::Signature:
      return polyline_at(signature_vertices(family, family.shape_seed), progress);
  }
  throw std::invalid_argument("unknown path kind");
}

}  // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t stream_a, std::uint64_t stream_b) {
  std::seed_seq seq{lo32(seed), hi32(seed), lo32(stream_a), hi32(stream_a), lo32(stream_b), hi32(stream_b)};
  engine_.seed(seq);
}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

PathKind parse_path_kind(std::string_view name) {
  if (name == "line") return PathKind::Line;
  if (name == "circle") return PathKind::Circle;
  if (name == "zigzag") return PathKind::Zigzag;
  if (name == "signature") return PathKind::Signature;
  throw std::invalid_argument("unknown gesture family '" + std::string(name) + "'");
}

std::string_view to_string(PathKind kind) {
  switch (kind) {
    case PathKind::Line: return "line";
    case PathKind::Circle: return "circle";
    case PathKind::Zigzag: return "zigzag";
    case PathKind::Signature: return "signature";
  }
  return "unknown";
}

FingerLayout parse_finger_layout(std::string_view name) {
  if (name == "rigid") return FingerLayout::Rigid;
  if (name == "mirrored") return FingerLayout::Mirrored;
  if (name == "divergent") return FingerLayout::Divergent;
  throw std::invalid_argument("unknown finger layout '" + std::string(name) + "'");
}

std::string_view to_string(FingerLayout layout) {
  switch (layout) {
    case FingerLayout::Rigid: return "rigid";
    case FingerLayout::Mirrored: return "mirrored";
    case FingerLayout::Divergent: return "divergent";
  }
  return "unknown";
}

Eigen::MatrixX2d family_path(const GestureFamily& family, int finger, const Eigen::VectorXd& progress) {
  const double offset = finger * family.finger_spacing_px;
  if (finger == 0 || family.layout == FingerLayout::Rigid) {
    Eigen::MatrixX2d p = base_path(family, progress);
    p.col(0).array() += offset;
    return p;
  }
  if (family.layout == FingerLayout::Mirrored) {
    Eigen::MatrixX2d p = base_path(family, progress);
    p.col(0) = (family.screen.width_px - p.col(0).array() + offset).matrix();
    return p;
  }
  // Divergent fingers wander independently in both axes around their anchor
  // (a thumb circling while the index finger signs), sharing only the timing.
  const auto seed = family.shape_seed + 1000u * static_cast<std::uint64_t>(finger);
  const double cx = family.screen.width_px / 2.0;
  const double cy = family.screen.height_px / 2.0;
  const Eigen::MatrixX2d across = polyline_at(signature_vertices(family, seed, 2 * finger + 1), progress);
  const Eigen::MatrixX2d down = polyline_at(signature_vertices(family, seed + 1, 2 * finger), progress);
  Eigen::MatrixX2d p(progress.size(), 2);
  p.col(0) = (down.col(1).array() - cy + cx + offset).matrix();
  p.col(1) = across.col(1);
  return p;
}

std::vector<GestureTrace> generate(const GestureFamily& family, const NoiseModel& noise, int n_reps,
                                   int first_trial) {
  if (n_reps < 1 || family.finger_count < 1 || family.scale_px <= 0.0 || family.duration_s <= 0.0) {
    throw std::invalid_argument("invalid synthetic gesture parameters");
  }
  if (noise.positional_sigma_px < 0.0 || noise.finger_sigma_fraction < 0.0 ||
      noise.tempo_jitter_fraction < 0.0 || noise.tempo_jitter_fraction >= 0.5) {
    throw std::invalid_argument("invalid noise parameters");
  }
  if (family.scale_px > std::min(family.screen.width_px, family.screen.height_px)) {
    throw std::invalid_argument("gesture scale exceeds the screen");
  }

  const double jitter = noise.tempo_jitter_fraction;
  std::vector<GestureTrace> traces;
  for (int r = 0; r < n_reps; ++r) {
    const int trial = first_trial + r;
    const auto stream = static_cast<std::uint64_t>(trial);

    Rng timing(noise.seed, stream, 0);
    const double duration_ms = 1000.0 * family.duration_s * (1.0 + timing.uniform(-jitter, jitter));
    const double warp = timing.uniform(-jitter, jitter);
    std::vector<double> times{0.0};
    while (times.back() < duration_ms) {
      times.push_back(times.back() + 5.0 * (1.0 + timing.uniform(-0.2, 0.2)));
    }
    const auto n = static_cast<Eigen::Index>(times.size());
    Eigen::VectorXd progress(n);
    for (Eigen::Index k = 0; k < n; ++k) {
      const double tau = std::min(times[static_cast<std::size_t>(k)] / duration_ms, 1.0);
      progress(k) = min_jerk(tau + warp * std::sin(2.0 * std::numbers::pi * tau) / (2.0 * std::numbers::pi));
    }

    Rng hand(noise.seed, stream, 1);
    Eigen::MatrixX2d hand_noise(n, 2);
    for (Eigen::Index k = 0; k < n; ++k) {
      hand_noise(k, 0) = hand.normal(0.0, noise.positional_sigma_px);
      hand_noise(k, 1) = hand.normal(0.0, noise.positional_sigma_px);
    }
    Rng dup(noise.seed, stream, 0xd0b1e);
    std::vector<bool> duplicate(times.size());
    for (std::size_t k = 0; k < times.size(); ++k) {
      duplicate[k] = dup.uniform() < noise.duplicate_probability;
    }

    GestureTrace trace;
    trace.gesture_id = family.gesture_id;
    trace.subject_id = family.subject_id;
    trace.session = trial <= 12 ? 1 : 2;
    trace.trial_index = trial;
    trace.screen = family.screen;
    trace.nominal_rate_hz = 200.0;
    for (int f = 0; f < family.finger_count; ++f) {
      const Eigen::MatrixX2d ideal = family_path(family, f, progress);
      Rng own(noise.seed, stream, 2 + static_cast<std::uint64_t>(f));
      const double own_sigma = noise.finger_sigma_fraction * noise.positional_sigma_px;
      FingerStream stream_out;
      for (Eigen::Index k = 0; k < n; ++k) {
        const double x = ideal(k, 0) + hand_noise(k, 0) + own.normal(0.0, own_sigma);
        const double y = ideal(k, 1) + hand_noise(k, 1) + own.normal(0.0, own_sigma);
        Sample s{times[static_cast<std::size_t>(k)], std::clamp(x, 0.0, double(family.screen.width_px)),
                 std::clamp(y, 0.0, double(family.screen.height_px))};
        stream_out.samples.push_back(s);
        if (duplicate[static_cast<std::size_t>(k)]) {
          stream_out.samples.push_back(s);
        }
      }
      trace.fingers.push_back(std::move(stream_out));
    }
    traces.push_back(std::move(trace));
  }
  return traces;
}

}  // namespace gesturekit
