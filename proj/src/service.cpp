#include "gesturekit/service.hpp"

#include "gesturekit/infocap.hpp"
#include "gesturekit/recognizer.hpp"

#include <httplib.h>

#include <cstdio>
#include <random>

namespace gesturekit {

using nlohmann::json;

namespace {

Response error(int status, std::string_view code, std::string message) {
  return {status, json{{"error", code}, {"message", std::move(message)}}};
}

// Parses a request body, reporting the failure as a 400.
std::optional<json> parse_body(const std::string& body, Response& failure) {
  json doc = json::parse(body, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    failure = error(400, "bad_request", "request body must be a JSON object");
    return std::nullopt;
  }
  return doc;
}

}  // namespace

std::string_view security_band(double mean_bits) {
  if (mean_bits < 15.0) return "weak";
  if (mean_bits > 30.0) return "strong";
  return "moderate";
}

Service::Service(Config config) : config_(std::move(config)), store_(config_.data_dir) {
  std::random_device rd;
  session_salt_ = (static_cast<unsigned long long>(rd()) << 32) ^ rd();
}

std::string Service::next_session_id() {
  // caller holds sessions_mutex_
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%016llx-%llu", session_salt_, ++session_counter_);
  return buf;
}

std::shared_ptr<EnrollmentSession> Service::find_session(const std::string& session_id) {
  std::lock_guard lock(sessions_mutex_);
  auto it = sessions_.find(session_id);
  return it == sessions_.end() ? nullptr : it->second;
}

Response Service::enroll_start(const std::string& body, bool overwrite) {
  Response failure;
  auto doc = parse_body(body, failure);
  if (!doc) return failure;
  if (!doc->contains("gesture_id") || !(*doc)["gesture_id"].is_string() ||
      (*doc)["gesture_id"].get<std::string>().empty()) {
    return error(422, "invalid_request", "gesture_id must be a non-empty string");
  }
  const std::string gesture_id = (*doc)["gesture_id"];
  std::size_t required = 10;
  if (doc->contains("required_reps")) {
    const auto& r = (*doc)["required_reps"];
    if (!r.is_number_integer() || r.get<long long>() < 1 || r.get<long long>() > static_cast<long long>(kMaxTemplates)) {
      return error(422, "invalid_request", "required_reps must be an integer from 1 to 10");
    }
    required = r.get<std::size_t>();
  }

  std::lock_guard lock(sessions_mutex_);
  if (!overwrite) {
    if (store_.contains(gesture_id)) {
      return error(409, "conflict", "gesture '" + gesture_id + "' is already enrolled; use ?overwrite=true");
    }
    for (const auto& [id, s] : sessions_) {
      std::lock_guard slock(s->mutex);
      if (s->gesture_id == gesture_id && !s->complete) {
        return error(409, "conflict", "an enrollment for '" + gesture_id + "' is already in progress");
      }
    }
  }
  auto session = std::make_shared<EnrollmentSession>();
  session->session_id = next_session_id();
  session->gesture_id = gesture_id;
  session->required_reps = required;
  session->overwrite = overwrite;
  sessions_.emplace(session->session_id, session);
  return {200, json{{"session_id", session->session_id}, {"required_reps", required}}};
}

Response Service::enroll_trace(const std::string& session_id, const std::string& body) {
  auto session = find_session(session_id);
  if (!session) return error(404, "unknown_session", "no enrollment session '" + session_id + "'");

  Response failure;
  auto doc = parse_body(body, failure);
  if (!doc) return failure;

  GestureTrace trace;
  ResampledTrace resampled;
  try {
    trace = trace_from_json(*doc);
    resampled = resample(trace);
  } catch (const std::exception& e) {
    return error(422, "invalid_trace", e.what());
  }

  std::lock_guard lock(session->mutex);
  if (session->complete) {
    return error(409, "session_complete", "enrollment session is already complete");
  }
  if (!session->collected.empty() && session->collected.front().fingers.size() != trace.fingers.size()) {
    return error(422, "finger_count_mismatch",
                 "trace has " + std::to_string(trace.fingers.size()) + " finger(s) but earlier repetitions have " +
                     std::to_string(session->collected.front().fingers.size()));
  }
  session->collected.push_back(std::move(trace));

  json warnings = json::array();
  json out{{"accepted", true}, {"remaining", session->required_reps - session->collected.size()}};
  if (session->collected.size() < session->required_reps) {
    out["complete"] = false;
    out["warnings"] = warnings;
    return {200, out};
  }

  std::vector<ResampledTrace> reps;
  for (auto& t : session->collected) {
    t.gesture_id = session->gesture_id;
    reps.push_back(resample(t));
  }
  const TemplateSet tset = build_template_set(session->gesture_id, reps);
  if (!session->overwrite && store_.contains(session->gesture_id)) {
    session->collected.pop_back();
    return error(409, "conflict", "gesture '" + session->gesture_id + "' was enrolled by another session");
  }
  try {
    store_.put(tset);
  } catch (const std::exception& e) {
    return error(500, "storage_error", e.what());
  }
  session->complete = true;

  json security = nullptr;
  if (reps.size() >= 2) {
    try {
      const GroupMi g = group_mean_mi(normalize_finger_order(reps), config_.mi);
      security = {{"mean_bits", g.mean_bits},
                  {"band", security_band(g.mean_bits)},
                  {"band_basis", "heuristic"},
                  {"pairs", g.pairs.size()},
                  {"incomparable_pairs", g.incomparable_pairs}};
    } catch (const std::exception& e) {
      warnings.push_back(std::string("mutual information unavailable: ") + e.what());
    }
  } else {
    warnings.push_back("single repetition: no mutual information estimate and reduced matching accuracy");
  }
  out["complete"] = true;
  out["template_count"] = tset.templates.size();
  out["security"] = security;
  out["warnings"] = warnings;
  return {200, out};
}

Response Service::auth(const std::string& body) {
  Response failure;
  auto doc = parse_body(body, failure);
  if (!doc) return failure;
  if (!doc->contains("gesture_id") || !(*doc)["gesture_id"].is_string()) {
    return error(422, "invalid_request", "gesture_id must be a string");
  }
  if (!doc->contains("trace")) return error(422, "invalid_trace", "missing trace");
  double threshold = config_.default_threshold;
  if (doc->contains("threshold")) {
    const auto& t = (*doc)["threshold"];
    if (!t.is_number() || !(t.get<double>() > 0.0)) {
      return error(422, "invalid_request", "threshold must be a positive number");
    }
    threshold = t.get<double>();
  }
  const std::string gesture_id = (*doc)["gesture_id"];
  const auto tset = store_.get(gesture_id);
  if (!tset) return error(404, "unknown_gesture", "gesture '" + gesture_id + "' is not enrolled");

  ResampledTrace candidate;
  try {
    candidate = resample(trace_from_json((*doc)["trace"]));
  } catch (const std::exception& e) {
    return error(422, "invalid_trace", e.what());
  }
  const AuthDecision d =
      authenticate(canonicalize_for(candidate, *tset), *tset, threshold, config_.rotation_invariant);
  return {200, json{{"accepted", d.accepted}, {"score", d.score}, {"gate_failed", d.gate_failed}, {"threshold", threshold}}};
}

Response Service::analyze_mi(const std::string& body) {
  Response failure;
  auto doc = parse_body(body, failure);
  if (!doc) return failure;
  if (!doc->contains("traces") || !(*doc)["traces"].is_array() || (*doc)["traces"].size() != 2) {
    return error(422, "invalid_request", "traces must be an array of exactly two traces");
  }
  ResampledTrace a;
  ResampledTrace b;
  try {
    a = resample(trace_from_json((*doc)["traces"][0]));
    b = resample(trace_from_json((*doc)["traces"][1]));
  } catch (const std::exception& e) {
    return error(422, "invalid_trace", e.what());
  }
  try {
    const MiResult r = mutual_information(a, b, config_.mi);
    if (r.incomparable) {
      return error(422, "incomparable", "traces have different finger counts (" + std::to_string(a.finger_count()) +
                                            " vs " + std::to_string(b.finger_count()) + ")");
    }
    return {200, to_json(r)};
  } catch (const InsufficientDataError& e) {
    return error(422, "insufficient_data", e.what());
  }
}

void Service::mount(httplib::Server& server) {
  auto reply = [](httplib::Response& res, const Response& r) {
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
  };
  server.Post("/enroll/start", [this, reply](const httplib::Request& req, httplib::Response& res) {
    const bool overwrite = req.has_param("overwrite") && req.get_param_value("overwrite") == "true";
    reply(res, enroll_start(req.body, overwrite));
  });
  server.Post(R"(/enroll/([^/]+)/trace)", [this, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, enroll_trace(req.matches[1], req.body));
  });
  server.Post("/auth", [this, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, auth(req.body));
  });
  server.Post("/analyze/mi", [this, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, analyze_mi(req.body));
  });
  server.set_exception_handler([reply](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    std::string message = "internal error";
    try {
      std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      message = e.what();
    } catch (...) {
    }
    reply(res, error(500, "internal", message));
  });
}

void run_server(Service& service, const std::string& host) {
  httplib::Server server;
  service.mount(server);
  if (!server.listen(host, service.config().port)) {
    throw std::runtime_error("cannot listen on " + host + ":" + std::to_string(service.config().port));
  }
}

}  // namespace gesturekit
