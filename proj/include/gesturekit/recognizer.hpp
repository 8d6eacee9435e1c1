#ifndef GESTUREKIT_RECOGNIZER_HPP
#define GESTUREKIT_RECOGNIZER_HPP

#include "gesturekit/trace.hpp"

#include <Eigen/Dense>
#include <json.hpp>

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace gesturekit {

inline constexpr int kStrokePoints = 16;
/// Score returned when the angular distance reaches zero.
inline constexpr double kMaxScore = 1e4;
inline constexpr std::size_t kMaxTemplates = 10;

/// A stroke resampled to equidistant points, centred on the origin and scaled
/// so that the flattened (x0, y0, x1, y1, ...) vector has unit length.
struct NormalizedStroke {
  Eigen::Matrix<double, Eigen::Dynamic, 2> points;
};

NormalizedStroke normalize_stroke(const Eigen::Ref<const Eigen::MatrixX2d>& path, int n_points = kStrokePoints);

/// Protractor similarity 1 / acos(cosine) at the optimal rotation (or at zero
/// rotation when rotation_invariant is false), capped at kMaxScore.
double stroke_similarity(const NormalizedStroke& a, const NormalizedStroke& b, bool rotation_invariant = true);

struct GestureTemplate {
  std::vector<NormalizedStroke> strokes;  // one per finger
};

struct TemplateSet {
  std::string gesture_id;
  std::size_t finger_count = 0;
  std::vector<GestureTemplate> templates;
  /// Finger start positions of the first enrolled repetition, used to put a
  /// candidate's fingers in the same order before matching. May be empty.
  std::vector<Eigen::Vector2d> reference_starts;
};

/// Builds templates from up to 10 repetitions sharing one finger count.
/// Finger order is normalized against the first repetition.
TemplateSet build_template_set(const std::string& gesture_id, std::span<const ResampledTrace> repetitions,
                               int n_points = kStrokePoints);

struct MatchResult {
  double score = 0.0;
  std::optional<std::size_t> best_template_index;
  std::vector<double> per_finger_scores;
  bool gate_failed = false;
};

/// Reorders the candidate's fingers against the set's reference starts, when
/// both are available and the finger counts agree. Otherwise returns it as is.
ResampledTrace canonicalize_for(const ResampledTrace& candidate, const TemplateSet& tset);

/// Per-finger Protractor against every template, fingers paired by index,
/// averaged per template, best template wins. A finger-count mismatch scores 0.
MatchResult match(const ResampledTrace& candidate, const TemplateSet& tset, bool rotation_invariant = true);

struct AuthDecision {
  bool accepted = false;
  double score = 0.0;
  bool gate_failed = false;
};

AuthDecision authenticate(const ResampledTrace& candidate, const TemplateSet& tset, double threshold,
                          bool rotation_invariant = true);

nlohmann::json to_json(const TemplateSet& tset);
TemplateSet template_set_from_json(const nlohmann::json& doc);

}  // namespace gesturekit

#endif  // GESTUREKIT_RECOGNIZER_HPP
