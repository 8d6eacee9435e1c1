#include "gesturekit/infocap.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace gesturekit {

Eigen::MatrixXd to_feature_matrix(const ResampledTrace& trace) {
  if (trace.fingers.empty()) {
    throw std::invalid_argument("trace has no fingers");
  }
  const Eigen::Index n = trace.frame_count();
  if (n < kMinFrames) {
    throw std::invalid_argument("trace has fewer than 8 frames");
  }
  Eigen::MatrixXd features(n, 2 * static_cast<Eigen::Index>(trace.finger_count()));
  for (std::size_t f = 0; f < trace.finger_count(); ++f) {
    if (trace.fingers[f].rows() != n) {
      throw std::invalid_argument("fingers have unequal frame counts");
    }
    features.middleCols(2 * static_cast<Eigen::Index>(f), 2) = trace.fingers[f];
  }
  if (!features.allFinite()) {
    throw std::invalid_argument("trace contains non-finite coordinates");
  }
  return features;
}

Eigen::MatrixXd standardize_features(const Eigen::MatrixXd& features) {
  Eigen::MatrixXd centered = features.rowwise() - features.colwise().mean();
  const double rms = std::sqrt(centered.squaredNorm() / static_cast<double>(centered.rows()));
  if (rms > 0.0) {
    centered /= rms;
  }
  return centered;
}

double pearson(const Eigen::Ref<const Eigen::VectorXd>& x, const Eigen::Ref<const Eigen::VectorXd>& y) {
  const Eigen::VectorXd dx = x.array() - x.mean();
  const Eigen::VectorXd dy = y.array() - y.mean();
  const double sxx = dx.squaredNorm();
  const double syy = dy.squaredNorm();
  if (sxx <= 0.0 || syy <= 0.0) {
    return 0.0;
  }
  return std::clamp(dx.dot(dy) / std::sqrt(sxx * syy), -1.0, 1.0);
}

double gaussian_mi_bits(double r, Eigen::Index n) {
  return -0.5 * static_cast<double>(n) * std::log2(1.0 - r * r) - std::numbers::log2e / 2.0;
}

MiResult mutual_information(const ResampledTrace& a, const ResampledTrace& b, const MiConfig& config) {
  MiResult result;
  if (a.finger_count() != b.finger_count()) {
    result.incomparable = true;
    return result;
  }
  const Eigen::MatrixXd fa = standardize_features(to_feature_matrix(a));
  const Eigen::MatrixXd fb = standardize_features(to_feature_matrix(b));
  const auto basis = fit_pca(fa, fb, config.mse_cutoff_fraction);
  const Eigen::MatrixXd pa = basis.project(fa);
  const Eigen::MatrixXd pb = basis.project(fb);

  const Alignment alignment = align(smooth_rows(pa, config.alignment_smoothing_frames),
                                    smooth_rows(pb, config.alignment_smoothing_frames));

  // Residual i of an AR(2) fit belongs to frame i + 2.
  std::vector<std::pair<Eigen::Index, Eigen::Index>> kept;
  for (std::size_t k = 0; k < alignment.pairs.size(); ++k) {
    const auto [i, j] = alignment.pairs[k];
    if (!alignment.duplicate_mask[k] && i >= 2 && j >= 2) {
      kept.emplace_back(i - 2, j - 2);
    }
  }
  const auto n_eff = static_cast<Eigen::Index>(kept.size());
  if (n_eff < kMinEffectivePairs) {
    throw InsufficientDataError("too few aligned residual pairs for a mutual information estimate");
  }

  result.retained_k = basis.retained_k;
  Eigen::VectorXd x(n_eff), y(n_eff);
  for (Eigen::Index c = 0; c < basis.retained_k; ++c) {
    const auto ra = fit_ar2(pa.col(c)).residuals;
    const auto rb = fit_ar2(pb.col(c)).residuals;
    for (Eigen::Index k = 0; k < n_eff; ++k) {
      x(k) = ra(kept[static_cast<std::size_t>(k)].first);
      y(k) = rb(kept[static_cast<std::size_t>(k)].second);
    }
    ComponentMi comp;
    comp.component_index = c;
    comp.n_effective = n_eff;
    comp.pearson_r = pearson(x, y);
    const double r2 = std::min(comp.pearson_r * comp.pearson_r, config.r2_clamp);
    comp.bits = std::max(0.0, gaussian_mi_bits(std::sqrt(r2), n_eff));
    result.total_bits += comp.bits;
    result.per_component.push_back(comp);
  }
  return result;
}

namespace {

GroupMi summarize(std::vector<PairMi> pairs) {
  GroupMi group;
  double sum = 0.0;
  std::size_t used = 0;
  for (const auto& p : pairs) {
    if (p.result.incomparable) {
      ++group.incomparable_pairs;
      continue;
    }
    sum += p.result.total_bits;
    ++used;
  }
  if (used == 0) {
    throw std::invalid_argument("no comparable pairs (finger counts differ in every pair)");
  }
  group.mean_bits = sum / static_cast<double>(used);
  group.pairs = std::move(pairs);
  return group;
}

}  // namespace

GroupMi group_mean_mi(std::span<const ResampledTrace> traces, const MiConfig& config) {
  if (traces.size() < 2) {
    throw std::invalid_argument("group_mean_mi needs at least 2 traces");
  }
  std::vector<PairMi> pairs;
  for (std::size_t i = 0; i < traces.size(); ++i) {
    for (std::size_t j = i + 1; j < traces.size(); ++j) {
      pairs.push_back({i, j, mutual_information(traces[i], traces[j], config)});
    }
  }
  return summarize(std::move(pairs));
}

GroupMi cross_group_mi(std::span<const ResampledTrace> a, std::span<const ResampledTrace> b,
                       const MiConfig& config) {
  if (a.empty() || b.empty()) {
    throw std::invalid_argument("cross_group_mi needs two non-empty groups");
  }
  std::vector<PairMi> pairs;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      pairs.push_back({i, j, mutual_information(a[i], b[j], config)});
    }
  }
  return summarize(std::move(pairs));
}

double memorability_ratio(std::span<const ResampledTrace> generate, std::span<const ResampledTrace> recall,
                          const MiConfig& config) {
  const double within = group_mean_mi(generate, config).mean_bits;
  if (!(within > 0.0)) {
    throw std::domain_error("memorability ratio undefined: Generate mean MI is not positive");
  }
  return cross_group_mi(generate, recall, config).mean_bits / within;
}

nlohmann::json to_json(const MiResult& result) {
  if (result.incomparable) {
    return {{"incomparable", true}};
  }
  nlohmann::json components = nlohmann::json::array();
  for (const auto& c : result.per_component) {
    components.push_back({{"i", c.component_index}, {"n", c.n_effective}, {"r", c.pearson_r}, {"bits", c.bits}});
  }
  return {{"total_bits", result.total_bits}, {"retained_k", result.retained_k}, {"components", components}};
}

MiResult mi_result_from_json(const nlohmann::json& doc) {
  MiResult result;
  if (doc.value("incomparable", false)) {
    result.incomparable = true;
    return result;
  }
  result.total_bits = doc.at("total_bits").get<double>();
  result.retained_k = doc.at("retained_k").get<Eigen::Index>();
  for (const auto& c : doc.at("components")) {
    result.per_component.push_back(
        {c.at("i").get<Eigen::Index>(), c.at("n").get<Eigen::Index>(), c.at("r").get<double>(), c.at("bits").get<double>()});
  }
  return result;
}

}  // namespace gesturekit
