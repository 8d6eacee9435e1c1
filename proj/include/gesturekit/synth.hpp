#ifndef GESTUREKIT_SYNTH_HPP
#define GESTUREKIT_SYNTH_HPP

#include "gesturekit/trace.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace gesturekit {

/// Deterministic random source: std::mt19937_64 seeded through std::seed_seq
/// (both fully specified by the standard), with uniforms built from the top
/// 53 bits and normals from Box-Muller. Independent of the standard library's
/// distribution implementations.
class Rng {
public:
  Rng(std::uint64_t seed, std::uint64_t stream_a = 0, std::uint64_t stream_b = 0);

  double uniform();                      // [0, 1)
  double uniform(double lo, double hi);  // [lo, hi)
  double normal();
  double normal(double mean, double sigma) { return mean + sigma * normal(); }
  std::uint64_t next() { return engine_(); }

private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

enum class PathKind { Line, Circle, Zigzag, Signature };
enum class FingerLayout {
  Rigid,      // extra fingers are translated copies of the path
  Mirrored,   // extra fingers mirror the path about the vertical axis through its centre
  Divergent,  // extra fingers draw their own signature-like path
};

PathKind parse_path_kind(std::string_view name);
std::string_view to_string(PathKind kind);
FingerLayout parse_finger_layout(std::string_view name);
std::string_view to_string(FingerLayout layout);

struct GestureFamily {
  PathKind kind = PathKind::Signature;
  int turns = 8;  // zigzag only
  int finger_count = 1;
  FingerLayout layout = FingerLayout::Rigid;
  double finger_spacing_px = 60.0;
  double scale_px = 600.0;
  double duration_s = 2.0;
  /// Selects the random control points of signature-like paths.
  std::uint64_t shape_seed = 0;
  ScreenSize screen{1280, 800};
  std::string gesture_id = "synthetic";
  std::string subject_id = "synthetic";
};

struct NoiseModel {
  /// Per-frame white positional noise shared by all fingers (hand tremor).
  double positional_sigma_px = 2.0;
  /// Extra independent noise per finger, as a fraction of positional_sigma_px.
  double finger_sigma_fraction = 0.25;
  /// Per-repetition tempo variation in [0, 0.5): total duration and a smooth
  /// monotone time warp both vary by up to this fraction.
  double tempo_jitter_fraction = 0.1;
  /// Probability that a touch frame is reported twice with the same timestamp.
  double duplicate_probability = 0.05;
  std::uint64_t seed = 0;
};

/// Ideal path of finger `finger` at arc-length-progress s in [0, 1].
Eigen::MatrixX2d family_path(const GestureFamily& family, int finger, const Eigen::VectorXd& progress);

/// n_reps repetitions numbered from first_trial. Trials 1-12 are session 1,
/// later trials session 2. Samples arrive at ~200 Hz with timestamp jitter.
std::vector<GestureTrace> generate(const GestureFamily& family, const NoiseModel& noise, int n_reps,
                                   int first_trial = 1);

}  // namespace gesturekit

#endif  // GESTUREKIT_SYNTH_HPP
