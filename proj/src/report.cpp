#include "gesturekit/report.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <optional>
#include <sstream>

namespace gesturekit {

std::string format_number(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

namespace {

std::string opt(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

nlohmann::json opt_json(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); }

}  // namespace

nlohmann::json to_json(const GestureReport& report) {
  nlohmann::json durations = nlohmann::json::object();
  for (const auto& [group, d] : report.mean_duration_s) {
    durations[std::string(to_string(group))] = d;
  }
  nlohmann::json reps = nlohmann::json::array();
  for (const auto& r : report.repetitions) {
    reps.push_back({{"trial", r.trial_index},
                    {"group", to_string(r.group)},
                    {"duration_s", r.duration_s},
                    {"mean_bits", opt_json(r.mean_bits)}});
  }
  return {{"gesture_id", report.gesture_id},
          {"finger_count", report.finger_count},
          {"mean_mi_generate", opt_json(report.mean_mi_generate)},
          {"mean_mi_generate_stable", opt_json(report.mean_mi_generate_stable)},
          {"mean_mi_recall1", opt_json(report.mean_mi_recall1)},
          {"mean_mi_recall2", opt_json(report.mean_mi_recall2)},
          {"cross_mi", opt_json(report.cross_mi)},
          {"memorability_ratio", opt_json(report.memorability_ratio)},
          {"mean_duration_s", durations},
          {"incomparable_pairs", report.incomparable_pairs},
          {"repetitions", reps}};
}

nlohmann::json to_json(const RocReport& report) {
  nlohmann::json points = nlohmann::json::array();
  for (const auto& p : report.points) {
    points.push_back({{"threshold", p.threshold}, {"tpr", p.tpr}, {"fpr", p.fpr}});
  }
  return {{"eer", report.eer},
          {"eer_threshold", report.eer_threshold},
          {"n_genuine", report.n_genuine},
          {"n_impostor", report.n_impostor},
          {"genuine_gate_failures", report.genuine_gate_failures},
          {"degenerate", report.degenerate},
          {"points", points}};
}

nlohmann::json to_json(std::span<const TemplateCountResult> results) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : results) {
    out.push_back({{"n_templates", r.n_templates}, {"eer", r.eer}, {"roc", to_json(r.report)}});
  }
  return out;
}

std::string summary_csv(std::span<const GestureReport> reports) {
  std::ostringstream out;
  out << "gesture_id,finger_count,mean_mi_generate,mean_mi_generate_stable,mean_mi_recall1,"
         "mean_mi_recall2,cross_mi,memorability_ratio,incomparable_pairs\n";
  for (const auto& r : reports) {
    out << r.gesture_id << ',' << r.finger_count << ',' << opt(r.mean_mi_generate) << ','
        << opt(r.mean_mi_generate_stable) << ',' << opt(r.mean_mi_recall1) << ',' << opt(r.mean_mi_recall2) << ','
        << opt(r.cross_mi) << ',' << opt(r.memorability_ratio) << ',' << r.incomparable_pairs << '\n';
  }
  return out.str();
}

std::string mi_vs_repetition_csv(std::span<const GestureReport> reports) {
  std::ostringstream out;
  out << "gesture_id,trial,group,mean_bits\n";
  for (const auto& r : reports) {
    for (const auto& rep : r.repetitions) {
      out << r.gesture_id << ',' << rep.trial_index << ',' << to_string(rep.group) << ',' << opt(rep.mean_bits)
          << '\n';
    }
  }
  return out.str();
}

std::string duration_vs_repetition_csv(std::span<const GestureReport> reports) {
  std::ostringstream out;
  out << "gesture_id,trial,group,duration_s\n";
  for (const auto& r : reports) {
    for (const auto& rep : r.repetitions) {
      out << r.gesture_id << ',' << rep.trial_index << ',' << to_string(rep.group) << ','
          << format_number(rep.duration_s) << '\n';
    }
  }
  return out.str();
}

std::string mi_histogram_csv(std::span<const GestureReport> reports, double bin_width_bits) {
  std::map<long long, int> bins;
  for (const auto& r : reports) {
    if (r.mean_mi_generate) {
      bins[static_cast<long long>(std::floor(*r.mean_mi_generate / bin_width_bits))] += 1;
    }
  }
  std::ostringstream out;
  out << "bin_low,bin_high,count\n";
  for (const auto& [bin, count] : bins) {
    out << format_number(bin * bin_width_bits) << ',' << format_number((bin + 1) * bin_width_bits) << ',' << count
        << '\n';
  }
  return out.str();
}

std::string roc_csv(const RocReport& report) {
  std::ostringstream out;
  out << "threshold,tpr,fpr\n";
  for (const auto& p : report.points) {
    out << format_number(p.threshold) << ',' << format_number(p.tpr) << ',' << format_number(p.fpr) << '\n';
  }
  return out.str();
}

std::string eer_csv(std::span<const TemplateCountResult> results) {
  std::ostringstream out;
  out << "n_templates,eer,eer_threshold,n_genuine,n_impostor,genuine_gate_failures,degenerate\n";
  for (const auto& r : results) {
    out << r.n_templates << ',' << format_number(r.eer) << ',' << format_number(r.report.eer_threshold) << ','
        << r.report.n_genuine << ',' << r.report.n_impostor << ',' << r.report.genuine_gate_failures << ','
        << (r.report.degenerate ? "true" : "false") << '\n';
  }
  return out.str();
}

std::string attack_csv(std::span<const AttackRow> rows) {
  std::ostringstream out;
  out << "participant,best_score,attempts,gate_failures\n";
  for (const auto& r : rows) {
    out << r.participant << ',' << format_number(r.best_score) << ',' << r.attempts << ',' << r.gate_failures
        << '\n';
  }
  return out.str();
}

}  // namespace gesturekit
