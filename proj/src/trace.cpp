#include "gesturekit/trace.hpp"

#include "gesturekit/spline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace gesturekit {

namespace {

using nlohmann::json;

const json& require(const json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end()) {
    throw TraceError(std::string("trace document is missing field '") + key + "'");
  }
  return *it;
}

int require_int(const json& doc, const char* key) {
  const json& v = require(doc, key);
  if (!v.is_number_integer()) {
    throw TraceError(std::string("field '") + key + "' must be an integer");
  }
  return v.get<int>();
}

double require_number(const json& doc, const char* key) {
  const json& v = require(doc, key);
  if (!v.is_number()) {
    throw TraceError(std::string("field '") + key + "' must be a number");
  }
  const double d = v.get<double>();
  if (!std::isfinite(d)) {
    throw TraceError(std::string("field '") + key + "' must be finite");
  }
  return d;
}

std::string require_string(const json& doc, const char* key) {
  const json& v = require(doc, key);
  if (!v.is_string()) {
    throw TraceError(std::string("field '") + key + "' must be a string");
  }
  return v.get<std::string>();
}

FingerStream parse_finger(const json& arr, std::size_t index, const ScreenSize& screen) {
  if (!arr.is_array()) {
    throw TraceError("finger " + std::to_string(index) + " must be an array of samples");
  }
  FingerStream finger;
  finger.samples.reserve(arr.size());
  for (const json& s : arr) {
    if (!s.is_object()) {
      throw TraceError("finger " + std::to_string(index) + ": sample must be an object");
    }
    Sample sample{require_number(s, "t"), require_number(s, "x"), require_number(s, "y")};
    if (sample.x_px < 0.0 || sample.x_px > screen.width_px || sample.y_px < 0.0 ||
        sample.y_px > screen.height_px) {
      throw TraceError("finger " + std::to_string(index) + ": sample outside the screen");
    }
    if (!finger.samples.empty()) {
      const double prev = finger.samples.back().t_ms;
      if (sample.t_ms == prev) {
        continue;
      }
      if (sample.t_ms < prev) {
        throw TraceError("finger " + std::to_string(index) + ": timestamps decrease");
      }
    }
    finger.samples.push_back(sample);
  }
  if (finger.samples.size() < 2) {
    throw TraceError("finger " + std::to_string(index) + " needs at least 2 distinct samples");
  }
  return finger;
}

// Sum of start distances for assigning trace finger perm[k] to reference k.
double assignment_cost(const std::vector<Eigen::Vector2d>& ref, const ResampledTrace& trace,
                       const std::vector<std::size_t>& perm) {
  double cost = 0.0;
  for (std::size_t k = 0; k < ref.size(); ++k) {
    cost += (trace.start(perm[k]) - ref[k]).norm();
  }
  return cost;
}

}  // namespace

GestureTrace trace_from_json(const json& doc) {
  if (!doc.is_object()) {
    throw TraceError("trace document must be a JSON object");
  }
  GestureTrace trace;
  trace.gesture_id = require_string(doc, "gesture_id");
  trace.subject_id = require_string(doc, "subject_id");
  trace.session = require_int(doc, "session");
  trace.trial_index = require_int(doc, "trial");
  const json& screen = require(doc, "screen");
  if (!screen.is_object()) {
    throw TraceError("field 'screen' must be an object");
  }
  trace.screen = {require_int(screen, "w"), require_int(screen, "h")};
  if (trace.screen.width_px <= 0 || trace.screen.height_px <= 0) {
    throw TraceError("screen dimensions must be positive");
  }
  trace.nominal_rate_hz = require_number(doc, "rate_hz");
  if (trace.nominal_rate_hz <= 0.0) {
    throw TraceError("rate_hz must be positive");
  }
  const json& fingers = require(doc, "fingers");
  if (!fingers.is_array()) {
    throw TraceError("field 'fingers' must be an array");
  }
  if (fingers.empty()) {
    throw TraceError("trace has no fingers");
  }
  if (auto it = doc.find("finger_count"); it != doc.end()) {
    if (!it->is_number_integer() || it->get<long long>() != static_cast<long long>(fingers.size())) {
      throw TraceError("declared finger_count does not match the fingers array");
    }
  }
  for (std::size_t i = 0; i < fingers.size(); ++i) {
    trace.fingers.push_back(parse_finger(fingers[i], i, trace.screen));
  }
  return trace;
}

GestureTrace parse_trace(std::string_view document) {
  json doc = json::parse(document.begin(), document.end(), nullptr, false);
  if (doc.is_discarded()) {
    throw TraceError("trace document is not valid JSON");
  }
  return trace_from_json(doc);
}

json to_json(const GestureTrace& trace) {
  json fingers = json::array();
  for (const auto& finger : trace.fingers) {
    json samples = json::array();
    for (const auto& s : finger.samples) {
      samples.push_back({{"t", s.t_ms}, {"x", s.x_px}, {"y", s.y_px}});
    }
    fingers.push_back(std::move(samples));
  }
  return {{"gesture_id", trace.gesture_id},
          {"subject_id", trace.subject_id},
          {"session", trace.session},
          {"trial", trace.trial_index},
          {"screen", {{"w", trace.screen.width_px}, {"h", trace.screen.height_px}}},
          {"rate_hz", trace.nominal_rate_hz},
          {"fingers", std::move(fingers)}};
}

std::string serialize_trace(const GestureTrace& trace) { return to_json(trace).dump(); }

ResampledTrace resample(const GestureTrace& trace, double target_hz) {
  if (!(target_hz > 0.0)) {
    throw std::invalid_argument("target rate must be positive");
  }
  if (trace.fingers.empty()) {
    throw TraceError("trace has no fingers");
  }

  double grid_start = -std::numeric_limits<double>::infinity();
  double grid_end = std::numeric_limits<double>::infinity();
  double source_span = 0.0;
  std::size_t source_intervals = 0;
  std::vector<CubicSpline<double>> splines;
  splines.reserve(trace.fingers.size());

  for (const auto& finger : trace.fingers) {
    std::vector<Sample> samples;
    for (const auto& s : finger.samples) {
      if (!samples.empty() && s.t_ms == samples.back().t_ms) {
        continue;
      }
      samples.push_back(s);
    }
    if (samples.size() < 3) {
      throw TraceError("trace too short to interpolate (need 3 distinct samples per finger)");
    }
    const auto n = static_cast<Eigen::Index>(samples.size());
    Eigen::VectorXd t(n);
    Eigen::MatrixX2d xy(n, 2);
    for (Eigen::Index i = 0; i < n; ++i) {
      t(i) = samples[i].t_ms / 1000.0;
      xy(i, 0) = samples[i].x_px;
      xy(i, 1) = samples[i].y_px;
    }
    grid_start = std::max(grid_start, t(0));
    grid_end = std::min(grid_end, t(n - 1));
    source_span += t(n - 1) - t(0);
    source_intervals += samples.size() - 1;
    splines.emplace_back(t, xy);
  }

  const double span = grid_end - grid_start;
  const Eigen::Index frames =
      span > 0.0 ? static_cast<Eigen::Index>(std::floor(span * target_hz + 1e-9)) + 1 : 0;
  if (frames < 2) {
    throw TraceError("degenerate resampling grid (fingers overlap for less than 2 frames)");
  }

  // Anti-alias smoothing only applies when decimating.
  const double source_hz = static_cast<double>(source_intervals) / source_span;
  const bool smooth = source_hz > 1.5 * target_hz;
  constexpr int kTaps = 25;
  Eigen::VectorXd offsets = Eigen::VectorXd::Zero(1);
  Eigen::VectorXd weights = Eigen::VectorXd::Ones(1);
  if (smooth) {
    const double sigma = 0.3 / target_hz;
    offsets = Eigen::VectorXd::LinSpaced(kTaps, -3.0 * sigma, 3.0 * sigma);
    weights = (-0.5 * (offsets.array() / sigma).square()).exp().matrix();
    weights /= weights.sum();
  }

  ResampledTrace out;
  out.gesture_id = trace.gesture_id;
  out.subject_id = trace.subject_id;
  out.session = trace.session;
  out.trial_index = trace.trial_index;
  out.rate_hz = target_hz;
  out.start_s = grid_start;
  for (const auto& spline : splines) {
    FingerPath path(frames, 2);
    for (Eigen::Index i = 0; i < frames; ++i) {
      const double t = grid_start + static_cast<double>(i) / target_hz;
      Eigen::RowVector2d acc = Eigen::RowVector2d::Zero();
      for (Eigen::Index k = 0; k < offsets.size(); ++k) {
        acc += weights(k) * spline(t + offsets(k));
      }
      path.row(i) = acc;
    }
    out.fingers.push_back(std::move(path));
  }
  return out;
}

std::vector<std::size_t> finger_permutation(const std::vector<Eigen::Vector2d>& reference_starts,
                                            const ResampledTrace& trace) {
  const std::size_t n = reference_starts.size();
  if (trace.finger_count() != n) {
    throw std::invalid_argument("finger count mismatch in finger ordering");
  }
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  if (n <= 1) {
    return perm;
  }

  constexpr std::size_t kExhaustiveLimit = 8;
  if (n <= kExhaustiveLimit) {
    std::vector<std::size_t> best = perm;
    double best_cost = assignment_cost(reference_starts, trace, perm);
    while (std::next_permutation(perm.begin(), perm.end())) {
      const double cost = assignment_cost(reference_starts, trace, perm);
      if (cost < best_cost) {
        best_cost = cost;
        best = perm;
      }
    }
    return best;
  }

  // Greedy nearest start for large finger counts.
  std::vector<bool> used(n, false);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pick = n;
    double pick_d = std::numeric_limits<double>::infinity();
    for (std::size_t f = 0; f < n; ++f) {
      if (used[f]) continue;
      const double d = (trace.start(f) - reference_starts[k]).norm();
      if (d < pick_d) {
        pick_d = d;
        pick = f;
      }
    }
    used[pick] = true;
    perm[k] = pick;
  }
  return perm;
}

ResampledTrace reorder_fingers(const ResampledTrace& trace, const std::vector<std::size_t>& permutation) {
  ResampledTrace out = trace;
  for (std::size_t k = 0; k < permutation.size(); ++k) {
    out.fingers[k] = trace.fingers.at(permutation[k]);
  }
  return out;
}

std::vector<ResampledTrace> normalize_finger_order(std::vector<ResampledTrace> traces) {
  if (traces.empty()) {
    return traces;
  }
  const std::size_t n = traces.front().finger_count();
  std::vector<Eigen::Vector2d> reference;
  for (std::size_t f = 0; f < n; ++f) {
    reference.push_back(traces.front().start(f));
  }
  for (std::size_t i = 1; i < traces.size(); ++i) {
    if (traces[i].finger_count() != n) {
      throw std::invalid_argument("finger count mismatch across traces");
    }
    traces[i] = reorder_fingers(traces[i], finger_permutation(reference, traces[i]));
  }
  return traces;
}

}  // namespace gesturekit
