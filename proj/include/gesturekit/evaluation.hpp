#ifndef GESTUREKIT_EVALUATION_HPP
#define GESTUREKIT_EVALUATION_HPP

#include "gesturekit/infocap.hpp"
#include "gesturekit/recognizer.hpp"
#include "gesturekit/trace.hpp"

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gesturekit {

/// Trial ranges: Generate 1-10, Recall1 11-12, Recall2 13-17.
enum class RepetitionGroup { Generate, Recall1, Recall2 };

std::optional<RepetitionGroup> group_of_trial(int trial_index);
std::string_view to_string(RepetitionGroup group);

/// Preprocessed traces keyed by gesture id, each list sorted by trial index.
using Corpus = std::map<std::string, std::vector<ResampledTrace>>;

std::vector<ResampledTrace> select_group(std::span<const ResampledTrace> traces, RepetitionGroup group);

struct TrialLabel {
  std::string claimed_gesture_id;
  std::string true_gesture_id;
  ResampledTrace trace;

  bool genuine() const { return claimed_gesture_id == true_gesture_id; }
};

struct RocPoint {
  double threshold = 0.0;
  double tpr = 0.0;
  double fpr = 0.0;
};

struct RocReport {
  /// Ascending thresholds: every distinct observed score, then one value above the maximum.
  std::vector<RocPoint> points;
  double eer = 0.0;
  double eer_threshold = 0.0;
  std::size_t n_genuine = 0;
  std::size_t n_impostor = 0;
  /// Genuine trials that failed the finger-count gate (scored 0, still counted).
  std::size_t genuine_gate_failures = 0;
  /// All scores identical; the curve carries no information.
  bool degenerate = false;
};

/// Exact ROC from labelled scores; a trial is accepted when score >= threshold.
RocReport roc_from_scores(std::span<const double> genuine, std::span<const double> impostor);

/// Equal error rate of a curve: linear interpolation between the adjacent
/// points where fpr - (1 - tpr) changes sign.
void locate_eer(RocReport& report);

/// Genuine trials from `group` of every gesture, plus every such trial claimed
/// against every other gesture as an impostor.
std::vector<TrialLabel> make_trials(const Corpus& corpus, RepetitionGroup group);

/// Template sets from the first n_templates Generate repetitions of each gesture.
std::map<std::string, TemplateSet> build_template_sets(const Corpus& corpus, std::size_t n_templates);

RocReport roc_sweep(std::span<const TrialLabel> trials, const std::map<std::string, TemplateSet>& template_sets,
                    bool rotation_invariant = true);

struct TemplateCountResult {
  std::size_t n_templates = 0;
  double eer = 0.0;
  RocReport report;
};

std::vector<TemplateCountResult> template_count_study(const Corpus& corpus, std::span<const std::size_t> counts,
                                                      RepetitionGroup genuine_group = RepetitionGroup::Recall1,
                                                      bool rotation_invariant = true);

struct RepetitionStat {
  int trial_index = 0;
  RepetitionGroup group = RepetitionGroup::Generate;
  double duration_s = 0.0;
  /// Mean MI between this repetition and the others of its group.
  std::optional<double> mean_bits;
};

struct GestureReport {
  std::string gesture_id;
  std::size_t finger_count = 0;
  std::optional<double> mean_mi_generate;
  std::optional<double> mean_mi_generate_stable;  // trials 6-10
  std::optional<double> mean_mi_recall1;
  std::optional<double> mean_mi_recall2;
  std::optional<double> cross_mi;
  std::optional<double> memorability_ratio;
  std::map<RepetitionGroup, double> mean_duration_s;
  std::size_t incomparable_pairs = 0;
  std::vector<RepetitionStat> repetitions;
};

GestureReport analyze_gesture(std::span<const ResampledTrace> traces, const MiConfig& config = {});

struct AttackRow {
  std::string participant;
  double best_score = 0.0;
  std::size_t attempts = 0;
  std::size_t gate_failures = 0;
};

/// Best recognizer score per participant. The target row comes first.
std::vector<AttackRow> attack_report(const TemplateSet& target_templates,
                                     std::span<const ResampledTrace> target_recalls,
                                     const std::vector<std::pair<std::string, std::vector<ResampledTrace>>>& attackers,
                                     bool rotation_invariant = true);

}  // namespace gesturekit

#endif  // GESTUREKIT_EVALUATION_HPP
