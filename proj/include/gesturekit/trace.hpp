#ifndef GESTUREKIT_TRACE_HPP
#define GESTUREKIT_TRACE_HPP

#include <Eigen/Dense>
#include <json.hpp>

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gesturekit {

/// Raised for trace documents that are malformed or violate trace invariants.
class TraceError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct Sample {
  double t_ms = 0.0;
  double x_px = 0.0;
  double y_px = 0.0;

  friend bool operator==(const Sample&, const Sample&) = default;
};

struct FingerStream {
  std::vector<Sample> samples;

  friend bool operator==(const FingerStream&, const FingerStream&) = default;
};

struct ScreenSize {
  int width_px = 0;
  int height_px = 0;

  friend bool operator==(const ScreenSize&, const ScreenSize&) = default;
};

/// One recorded repetition of a gesture, as captured by the device.
struct GestureTrace {
  std::string gesture_id;
  std::string subject_id;
  int session = 1;
  int trial_index = 1;
  ScreenSize screen;
  double nominal_rate_hz = 200.0;
  std::vector<FingerStream> fingers;

  std::size_t finger_count() const { return fingers.size(); }

  friend bool operator==(const GestureTrace&, const GestureTrace&) = default;
};

/// Frames x (x, y) positions of one finger on the uniform grid.
using FingerPath = Eigen::Matrix<double, Eigen::Dynamic, 2>;

/// A trace interpolated onto a uniform time grid shared by all fingers.
struct ResampledTrace {
  std::string gesture_id;
  std::string subject_id;
  int session = 1;
  int trial_index = 1;
  double rate_hz = 60.0;
  double start_s = 0.0;
  std::vector<FingerPath> fingers;

  std::size_t finger_count() const { return fingers.size(); }
  Eigen::Index frame_count() const { return fingers.empty() ? 0 : fingers.front().rows(); }
  double duration_s() const {
    return frame_count() > 0 ? static_cast<double>(frame_count() - 1) / rate_hz : 0.0;
  }
  Eigen::Vector2d start(std::size_t finger) const { return fingers.at(finger).row(0).transpose(); }
};

inline constexpr double kDefaultRateHz = 60.0;

/// Parses one trace document. Consecutive samples with equal timestamps are
/// collapsed to the first; any other non-increasing timestamp is an error.
GestureTrace parse_trace(std::string_view document);
GestureTrace trace_from_json(const nlohmann::json& doc);

nlohmann::json to_json(const GestureTrace& trace);
std::string serialize_trace(const GestureTrace& trace);

/// Interpolates every finger with a natural cubic spline onto a grid spanning
/// the intersection of the finger time ranges. When the source rate is well
/// above the target, the spline is smoothed with a short Gaussian before
/// sampling so content above the new Nyquist rate is attenuated.
ResampledTrace resample(const GestureTrace& trace, double target_hz = kDefaultRateHz);

/// Reorders fingers of each trace so that finger k starts nearest to finger k
/// of the first trace. The permutation minimises the summed start distance;
/// ties go to the lexicographically smallest permutation.
std::vector<ResampledTrace> normalize_finger_order(std::vector<ResampledTrace> traces);

/// Permutation p such that trace finger p[k] is matched to reference start k.
std::vector<std::size_t> finger_permutation(const std::vector<Eigen::Vector2d>& reference_starts,
                                            const ResampledTrace& trace);

ResampledTrace reorder_fingers(const ResampledTrace& trace, const std::vector<std::size_t>& permutation);

}  // namespace gesturekit

#endif  // GESTUREKIT_TRACE_HPP
