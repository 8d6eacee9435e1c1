#ifndef GESTUREKIT_REPORT_HPP
#define GESTUREKIT_REPORT_HPP

#include "gesturekit/evaluation.hpp"

#include <json.hpp>

#include <span>
#include <string>

namespace gesturekit {

// CSV schemas (first line of each output is the header):
//   summary.csv                 gesture_id,finger_count,mean_mi_generate,mean_mi_generate_stable,
//                               mean_mi_recall1,mean_mi_recall2,cross_mi,memorability_ratio,incomparable_pairs
//   mi_vs_repetition.csv        gesture_id,trial,group,mean_bits
//   duration_vs_repetition.csv  gesture_id,trial,group,duration_s
//   mi_histogram.csv            bin_low,bin_high,count        (per-gesture Generate mean)
//   roc_n<k>.csv                threshold,tpr,fpr
//   eer.csv                     n_templates,eer,eer_threshold,n_genuine,n_impostor,genuine_gate_failures,degenerate
//   attack.csv                  participant,best_score,attempts,gate_failures
// Absent values are empty fields. Numbers use the shortest round-trip form.

std::string format_number(double value);

nlohmann::json to_json(const GestureReport& report);
nlohmann::json to_json(const RocReport& report);
nlohmann::json to_json(std::span<const TemplateCountResult> results);

std::string summary_csv(std::span<const GestureReport> reports);
std::string mi_vs_repetition_csv(std::span<const GestureReport> reports);
std::string duration_vs_repetition_csv(std::span<const GestureReport> reports);
std::string mi_histogram_csv(std::span<const GestureReport> reports, double bin_width_bits = 10.0);
std::string roc_csv(const RocReport& report);
std::string eer_csv(std::span<const TemplateCountResult> results);
std::string attack_csv(std::span<const AttackRow> rows);

}  // namespace gesturekit

#endif  // GESTUREKIT_REPORT_HPP
