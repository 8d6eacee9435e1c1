#include "gesturekit/recognizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gesturekit {

NormalizedStroke normalize_stroke(const Eigen::Ref<const Eigen::MatrixX2d>& path, int n_points) {
  if (n_points < 2) {
    throw std::invalid_argument("normalize_stroke needs at least 2 output points");
  }
  const Eigen::Index n = path.rows();
  if (n < 2) {
    throw std::invalid_argument("stroke needs at least 2 points");
  }
  Eigen::VectorXd arc(n);
  arc(0) = 0.0;
  for (Eigen::Index i = 1; i < n; ++i) {
    arc(i) = arc(i - 1) + (path.row(i) - path.row(i - 1)).norm();
  }
  const double length = arc(n - 1);
  if (!(length > 0.0)) {
    throw std::invalid_argument("stroke has zero path length");
  }

  NormalizedStroke out;
  out.points.resize(n_points, 2);
  Eigen::Index seg = 1;
  for (int k = 0; k < n_points; ++k) {
    const double target = length * static_cast<double>(k) / static_cast<double>(n_points - 1);
    while (seg < n - 1 && arc(seg) < target) {
      ++seg;
    }
    const double span = arc(seg) - arc(seg - 1);
    const double u = span > 0.0 ? std::clamp((target - arc(seg - 1)) / span, 0.0, 1.0) : 0.0;
    out.points.row(k) = (1.0 - u) * path.row(seg - 1) + u * path.row(seg);
  }
  out.points.rowwise() -= out.points.colwise().mean();
  out.points /= out.points.norm();
  return out;
}

double stroke_similarity(const NormalizedStroke& a, const NormalizedStroke& b, bool rotation_invariant) {
  if (a.points.rows() != b.points.rows()) {
    throw std::invalid_argument("strokes have different point counts");
  }
  const auto& pa = a.points;
  const auto& pb = b.points;
  const double dot = (pa.col(0).cwiseProduct(pb.col(0)) + pa.col(1).cwiseProduct(pb.col(1))).sum();
  double cosine = dot;
  if (rotation_invariant) {
    const double cross = (pa.col(0).cwiseProduct(pb.col(1)) - pa.col(1).cwiseProduct(pb.col(0))).sum();
    const double angle = std::atan2(cross, dot);
    cosine = dot * std::cos(angle) + cross * std::sin(angle);
  }
  cosine = std::clamp(cosine, -1.0, 1.0);
  if (cosine >= 1.0 - 1e-12) {
    return kMaxScore;
  }
  return std::min(1.0 / std::acos(cosine), kMaxScore);
}

TemplateSet build_template_set(const std::string& gesture_id, std::span<const ResampledTrace> repetitions,
                               int n_points) {
  if (repetitions.empty()) {
    throw std::invalid_argument("template set needs at least one repetition");
  }
  if (repetitions.size() > kMaxTemplates) {
    throw std::invalid_argument("template set holds at most 10 repetitions");
  }
  const auto ordered =
      normalize_finger_order(std::vector<ResampledTrace>(repetitions.begin(), repetitions.end()));
  TemplateSet tset;
  tset.gesture_id = gesture_id;
  tset.finger_count = ordered.front().finger_count();
  for (std::size_t f = 0; f < tset.finger_count; ++f) {
    tset.reference_starts.push_back(ordered.front().start(f));
  }
  for (const auto& rep : ordered) {
    GestureTemplate t;
    for (const auto& finger : rep.fingers) {
      t.strokes.push_back(normalize_stroke(finger, n_points));
    }
    tset.templates.push_back(std::move(t));
  }
  return tset;
}

ResampledTrace canonicalize_for(const ResampledTrace& candidate, const TemplateSet& tset) {
  if (tset.reference_starts.size() != candidate.finger_count() || candidate.finger_count() < 2) {
    return candidate;
  }
  return reorder_fingers(candidate, finger_permutation(tset.reference_starts, candidate));
}

MatchResult match(const ResampledTrace& candidate, const TemplateSet& tset, bool rotation_invariant) {
  if (tset.templates.empty()) {
    throw std::invalid_argument("template set is empty");
  }
  MatchResult result;
  if (candidate.finger_count() != tset.finger_count) {
    result.gate_failed = true;
    return result;
  }
  const int n_points = static_cast<int>(tset.templates.front().strokes.front().points.rows());
  std::vector<NormalizedStroke> strokes;
  for (const auto& finger : candidate.fingers) {
    strokes.push_back(normalize_stroke(finger, n_points));
  }
  for (std::size_t t = 0; t < tset.templates.size(); ++t) {
    std::vector<double> per_finger;
    double sum = 0.0;
    for (std::size_t f = 0; f < strokes.size(); ++f) {
      const double s = stroke_similarity(strokes[f], tset.templates[t].strokes.at(f), rotation_invariant);
      per_finger.push_back(s);
      sum += s;
    }
    const double mean = sum / static_cast<double>(strokes.size());
    if (!result.best_template_index || mean > result.score) {
      result.score = mean;
      result.best_template_index = t;
      result.per_finger_scores = std::move(per_finger);
    }
  }
  return result;
}

AuthDecision authenticate(const ResampledTrace& candidate, const TemplateSet& tset, double threshold,
                          bool rotation_invariant) {
  if (!(threshold > 0.0)) {
    throw std::invalid_argument("threshold must be positive");
  }
  const MatchResult m = match(candidate, tset, rotation_invariant);
  return {m.score >= threshold, m.score, m.gate_failed};
}

nlohmann::json to_json(const TemplateSet& tset) {
  nlohmann::json reps = nlohmann::json::array();
  for (const auto& t : tset.templates) {
    nlohmann::json fingers = nlohmann::json::array();
    for (const auto& stroke : t.strokes) {
      nlohmann::json pts = nlohmann::json::array();
      for (Eigen::Index i = 0; i < stroke.points.rows(); ++i) {
        pts.push_back({stroke.points(i, 0), stroke.points(i, 1)});
      }
      fingers.push_back(std::move(pts));
    }
    reps.push_back(std::move(fingers));
  }
  nlohmann::json doc = {{"gesture_id", tset.gesture_id}, {"finger_count", tset.finger_count}, {"templates", reps}};
  if (!tset.reference_starts.empty()) {
    nlohmann::json starts = nlohmann::json::array();
    for (const auto& s : tset.reference_starts) {
      starts.push_back({s.x(), s.y()});
    }
    doc["reference_starts"] = std::move(starts);
  }
  return doc;
}

TemplateSet template_set_from_json(const nlohmann::json& doc) {
  TemplateSet tset;
  tset.gesture_id = doc.at("gesture_id").get<std::string>();
  tset.finger_count = doc.at("finger_count").get<std::size_t>();
  for (const auto& rep : doc.at("templates")) {
    GestureTemplate t;
    for (const auto& pts : rep) {
      NormalizedStroke stroke;
      stroke.points.resize(static_cast<Eigen::Index>(pts.size()), 2);
      for (std::size_t i = 0; i < pts.size(); ++i) {
        stroke.points(static_cast<Eigen::Index>(i), 0) = pts.at(i).at(0).get<double>();
        stroke.points(static_cast<Eigen::Index>(i), 1) = pts.at(i).at(1).get<double>();
      }
      t.strokes.push_back(std::move(stroke));
    }
    if (t.strokes.size() != tset.finger_count) {
      throw std::invalid_argument("template finger count disagrees with finger_count");
    }
    tset.templates.push_back(std::move(t));
  }
  if (tset.finger_count < 1 || tset.templates.empty() || tset.templates.size() > kMaxTemplates) {
    throw std::invalid_argument("template set must hold 1 to 10 templates of at least one finger");
  }
  if (auto it = doc.find("reference_starts"); it != doc.end()) {
    for (const auto& s : *it) {
      tset.reference_starts.emplace_back(s.at(0).get<double>(), s.at(1).get<double>());
    }
  }
  return tset;
}

}  // namespace gesturekit
