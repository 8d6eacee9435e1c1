#include "gesturekit/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace gesturekit {

std::optional<RepetitionGroup> group_of_trial(int trial_index) {
  if (trial_index >= 1 && trial_index <= 10) return RepetitionGroup::Generate;
  if (trial_index >= 11 && trial_index <= 12) return RepetitionGroup::Recall1;
  if (trial_index >= 13 && trial_index <= 17) return RepetitionGroup::Recall2;
  return std::nullopt;
}

std::string_view to_string(RepetitionGroup group) {
  switch (group) {
    case RepetitionGroup::Generate: return "Generate";
    case RepetitionGroup::Recall1: return "Recall1";
    case RepetitionGroup::Recall2: return "Recall2";
  }
  return "unknown";
}

std::vector<ResampledTrace> select_group(std::span<const ResampledTrace> traces, RepetitionGroup group) {
  std::vector<ResampledTrace> out;
  for (const auto& t : traces) {
    if (group_of_trial(t.trial_index) == group) {
      out.push_back(t);
    }
  }
  return out;
}

RocReport roc_from_scores(std::span<const double> genuine, std::span<const double> impostor) {
  if (genuine.empty() || impostor.empty()) {
    throw std::invalid_argument("ROC needs at least one genuine and one impostor trial");
  }
  std::vector<double> g(genuine.begin(), genuine.end());
  std::vector<double> im(impostor.begin(), impostor.end());
  std::sort(g.begin(), g.end());
  std::sort(im.begin(), im.end());

  std::vector<double> thresholds(g);
  thresholds.insert(thresholds.end(), im.begin(), im.end());
  std::sort(thresholds.begin(), thresholds.end());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());

  RocReport report;
  report.n_genuine = g.size();
  report.n_impostor = im.size();
  report.degenerate = thresholds.size() == 1;
  thresholds.push_back(std::nextafter(thresholds.back(), std::numeric_limits<double>::infinity()));

  auto accepted = [](const std::vector<double>& sorted, double thr) {
    return static_cast<double>(sorted.end() - std::lower_bound(sorted.begin(), sorted.end(), thr));
  };
  for (double thr : thresholds) {
    report.points.push_back({thr, accepted(g, thr) / static_cast<double>(g.size()),
                             accepted(im, thr) / static_cast<double>(im.size())});
  }
  locate_eer(report);
  return report;
}

void locate_eer(RocReport& report) {
  const auto& pts = report.points;
  if (pts.empty()) {
    throw std::invalid_argument("empty ROC curve");
  }
  auto gap = [](const RocPoint& p) { return p.fpr - (1.0 - p.tpr); };
  if (gap(pts.front()) <= 0.0) {
    report.eer = pts.front().fpr;
    report.eer_threshold = pts.front().threshold;
    return;
  }
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    const double d0 = gap(pts[k]);
    const double d1 = gap(pts[k + 1]);
    if (d1 <= 0.0) {
      const double frac = d0 / (d0 - d1);
      report.eer = pts[k].fpr + frac * (pts[k + 1].fpr - pts[k].fpr);
      report.eer_threshold = pts[k].threshold + frac * (pts[k + 1].threshold - pts[k].threshold);
      return;
    }
  }
  report.eer = pts.back().fpr;
  report.eer_threshold = pts.back().threshold;
}

std::vector<TrialLabel> make_trials(const Corpus& corpus, RepetitionGroup group) {
  std::vector<TrialLabel> trials;
  for (const auto& [gesture, traces] : corpus) {
    for (const auto& trace : select_group(traces, group)) {
      for (const auto& [claimed, unused] : corpus) {
        trials.push_back({claimed, gesture, trace});
      }
    }
  }
  return trials;
}

std::map<std::string, TemplateSet> build_template_sets(const Corpus& corpus, std::size_t n_templates) {
  std::map<std::string, TemplateSet> sets;
  for (const auto& [gesture, traces] : corpus) {
    auto generate = select_group(traces, RepetitionGroup::Generate);
    if (generate.size() < n_templates) {
      throw std::invalid_argument("gesture '" + gesture + "' has fewer Generate repetitions than templates requested");
    }
    generate.resize(n_templates);
    sets.emplace(gesture, build_template_set(gesture, generate));
  }
  return sets;
}

RocReport roc_sweep(std::span<const TrialLabel> trials, const std::map<std::string, TemplateSet>& template_sets,
                    bool rotation_invariant) {
  std::vector<double> genuine;
  std::vector<double> impostor;
  std::size_t gate_failures = 0;
  for (const auto& trial : trials) {
    auto it = template_sets.find(trial.claimed_gesture_id);
    if (it == template_sets.end()) {
      throw std::invalid_argument("no template set for gesture '" + trial.claimed_gesture_id + "'");
    }
    const MatchResult m = match(canonicalize_for(trial.trace, it->second), it->second, rotation_invariant);
    if (trial.genuine()) {
      genuine.push_back(m.score);
      gate_failures += m.gate_failed ? 1 : 0;
    } else {
      impostor.push_back(m.score);
    }
  }
  RocReport report = roc_from_scores(genuine, impostor);
  report.genuine_gate_failures = gate_failures;
  return report;
}

std::vector<TemplateCountResult> template_count_study(const Corpus& corpus, std::span<const std::size_t> counts,
                                                      RepetitionGroup genuine_group, bool rotation_invariant) {
  if (counts.empty()) {
    throw std::invalid_argument("no template counts requested");
  }
  const std::size_t most = *std::max_element(counts.begin(), counts.end());
  for (const auto& [gesture, traces] : corpus) {
    if (select_group(traces, RepetitionGroup::Generate).size() < most) {
      throw std::invalid_argument("gesture '" + gesture + "' has insufficient Generate repetitions");
    }
  }
  const auto trials = make_trials(corpus, genuine_group);
  std::vector<TemplateCountResult> out;
  for (std::size_t n : counts) {
    const auto sets = build_template_sets(corpus, n);
    RocReport report = roc_sweep(trials, sets, rotation_invariant);
    out.push_back({n, report.eer, std::move(report)});
  }
  return out;
}

namespace {

// Mean MI of a group, tolerating groups that are too small or fully incomparable.
std::optional<GroupMi> try_group(std::span<const ResampledTrace> traces, const MiConfig& config) {
  if (traces.size() < 2) return std::nullopt;
  try {
    return group_mean_mi(traces, config);
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
}

}  // namespace

GestureReport analyze_gesture(std::span<const ResampledTrace> traces, const MiConfig& config) {
  std::vector<ResampledTrace> sorted(traces.begin(), traces.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const auto& a, const auto& b) { return a.trial_index < b.trial_index; });

  auto generate = select_group(sorted, RepetitionGroup::Generate);
  if (generate.size() < 2) {
    throw std::invalid_argument("analysis needs at least 2 Generate repetitions");
  }
  GestureReport report;
  report.gesture_id = generate.front().gesture_id;
  report.finger_count = generate.front().finger_count();

  // Canonical finger order across every repetition with the reference finger count.
  std::vector<std::size_t> same_count;
  std::vector<ResampledTrace> ordered;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i].finger_count() == report.finger_count) {
      same_count.push_back(i);
      ordered.push_back(sorted[i]);
    }
  }
  ordered = normalize_finger_order(std::move(ordered));
  for (std::size_t k = 0; k < same_count.size(); ++k) {
    sorted[same_count[k]] = std::move(ordered[k]);
  }

  generate = select_group(sorted, RepetitionGroup::Generate);
  const auto recall1 = select_group(sorted, RepetitionGroup::Recall1);
  const auto recall2 = select_group(sorted, RepetitionGroup::Recall2);
  std::vector<ResampledTrace> stable;
  for (const auto& t : generate) {
    if (t.trial_index >= 6) stable.push_back(t);
  }

  std::map<int, std::pair<double, int>> per_rep;  // trial -> (sum, count)
  auto absorb = [&](const std::optional<GroupMi>& g, const std::vector<ResampledTrace>& members,
                    std::optional<double>& field) {
    if (!g) return;
    field = g->mean_bits;
    report.incomparable_pairs += g->incomparable_pairs;
    for (const auto& p : g->pairs) {
      if (p.result.incomparable) continue;
      for (std::size_t idx : {p.first, p.second}) {
        auto& slot = per_rep[members[idx].trial_index];
        slot.first += p.result.total_bits;
        slot.second += 1;
      }
    }
  };

  const auto g_generate = try_group(generate, config);
  if (!g_generate) {
    throw std::invalid_argument("Generate repetitions are not comparable");
  }
  absorb(g_generate, generate, report.mean_mi_generate);
  absorb(try_group(recall1, config), recall1, report.mean_mi_recall1);
  absorb(try_group(recall2, config), recall2, report.mean_mi_recall2);
  if (auto g = try_group(stable, config)) {
    report.mean_mi_generate_stable = g->mean_bits;
  }
  if (!recall2.empty()) {
    try {
      const auto cross = cross_group_mi(generate, recall2, config);
      report.cross_mi = cross.mean_bits;
      report.incomparable_pairs += cross.incomparable_pairs;
    } catch (const std::invalid_argument&) {
    }
  }
  if (report.cross_mi && *report.mean_mi_generate > 0.0) {
    report.memorability_ratio = *report.cross_mi / *report.mean_mi_generate;
  }

  std::map<RepetitionGroup, std::pair<double, int>> durations;
  for (const auto& t : sorted) {
    const auto group = group_of_trial(t.trial_index);
    if (!group) continue;
    auto& d = durations[*group];
    d.first += t.duration_s();
    d.second += 1;
    RepetitionStat stat{t.trial_index, *group, t.duration_s(), std::nullopt};
    if (auto it = per_rep.find(t.trial_index); it != per_rep.end() && it->second.second > 0) {
      stat.mean_bits = it->second.first / it->second.second;
    }
    report.repetitions.push_back(stat);
  }
  for (const auto& [group, d] : durations) {
    report.mean_duration_s[group] = d.first / d.second;
  }
  return report;
}

std::vector<AttackRow> attack_report(const TemplateSet& target_templates,
                                     std::span<const ResampledTrace> target_recalls,
                                     const std::vector<std::pair<std::string, std::vector<ResampledTrace>>>& attackers,
                                     bool rotation_invariant) {
  auto score_all = [&](const std::string& name, std::span<const ResampledTrace> attempts) {
    AttackRow row{name, 0.0, attempts.size(), 0};
    for (const auto& attempt : attempts) {
      const MatchResult m = match(canonicalize_for(attempt, target_templates), target_templates, rotation_invariant);
      row.best_score = std::max(row.best_score, m.score);
      row.gate_failures += m.gate_failed ? 1 : 0;
    }
    return row;
  };
  std::vector<AttackRow> rows;
  rows.push_back(score_all("target", target_recalls));
  for (const auto& [name, attempts] : attackers) {
    rows.push_back(score_all(name, attempts));
  }
  return rows;
}

}  // namespace gesturekit
