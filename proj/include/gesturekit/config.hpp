#ifndef GESTUREKIT_CONFIG_HPP
#define GESTUREKIT_CONFIG_HPP

#include "gesturekit/infocap.hpp"

#include <filesystem>
#include <string_view>

namespace gesturekit {

/// Acceptance threshold at the equal-error point of the synthetic calibration
/// corpus (Recall1 genuine trials, 10 templates).
inline constexpr double kCalibratedThreshold = 7.61054;

struct Config {
  std::filesystem::path data_dir = "gesturekit-data";
  double default_threshold = kCalibratedThreshold;
  bool rotation_invariant = true;
  int port = 8080;
  MiConfig mi;
};

/// Parses `key = value` lines. '#' starts a comment; string values may be quoted.
/// Keys: data_dir, default_threshold, rotation_invariant, mse_cutoff_fraction,
/// r2_clamp, alignment_smoothing_frames, port. Unknown keys are errors.
Config parse_config(std::string_view text);
Config load_config(const std::filesystem::path& path);

}  // namespace gesturekit

#endif  // GESTUREKIT_CONFIG_HPP
