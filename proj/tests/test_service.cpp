#include "gesturekit/config.hpp"
#include "gesturekit/corpus.hpp"
#include "gesturekit/evaluation.hpp"
#include "gesturekit/service.hpp"
#include "gesturekit/store.hpp"
#include "gesturekit/synth.hpp"

#include "support.hpp"

#include <doctest.h>
#include <httplib.h>

#include <algorithm>
#include <chrono>
#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <future>
#include <thread>

using namespace gesturekit;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("gesturekit-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

Config config_in(const fs::path& dir) {
  Config c;
  c.data_dir = dir;
  return c;
}

std::vector<GestureTrace> synth_traces(PathKind kind, int reps, std::uint64_t seed, int fingers = 1,
                                       double sigma = 2.0, std::uint64_t shape_seed = 1) {
  GestureFamily fam;
  fam.kind = kind;
  fam.finger_count = fingers;
  fam.shape_seed = shape_seed;
  NoiseModel noise;
  noise.seed = seed;
  noise.positional_sigma_px = sigma;
  return generate(fam, noise, reps);
}

std::string start_body(const std::string& id, int reps = 10) {
  return json{{"gesture_id", id}, {"required_reps", reps}}.dump();
}

// Enrolls the traces through the handlers; returns the last response.
Response enroll(Service& svc, const std::string& id, const std::vector<GestureTrace>& traces,
                bool overwrite = false) {
  const Response start = svc.enroll_start(start_body(id, static_cast<int>(traces.size())), overwrite);
  REQUIRE(start.status == 200);
  const std::string sid = start.body["session_id"];
  Response last;
  for (const auto& t : traces) {
    last = svc.enroll_trace(sid, serialize_trace(t));
    REQUIRE(last.status == 200);
  }
  return last;
}

std::string auth_body(const std::string& id, const GestureTrace& t) {
  return json{{"gesture_id", id}, {"trace", to_json(t)}}.dump();
}

}  // namespace

TEST_CASE("config parsing") {
  const Config c = parse_config(R"(
# service settings
data_dir = "/tmp/somewhere"   # quoted
default_threshold = 4.5
rotation_invariant = false
mse_cutoff_fraction = 0.1
port = 9001
)");
  CHECK(c.data_dir == fs::path("/tmp/somewhere"));
  CHECK(c.default_threshold == 4.5);
  CHECK_FALSE(c.rotation_invariant);
  CHECK(c.mi.mse_cutoff_fraction == 0.1);
  CHECK(c.port == 9001);
  CHECK(parse_config("").default_threshold == kCalibratedThreshold);
  CHECK_THROWS_AS(parse_config("colour = blue"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config("default_threshold = 0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config("default_threshold = abc"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config("mse_cutoff_fraction = 1.5"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config("rotation_invariant = maybe"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config("just words"), std::invalid_argument);
}

TEST_CASE("shipped threshold is the calibration corpus EER point") {
  // Median 10-template EER threshold over ten signature corpora, sigma 16 px.
  std::vector<double> thresholds;
  const std::vector<std::size_t> counts{10};
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Corpus corpus;
    for (int g = 0; g < 10; ++g) {
      GestureFamily fam;
      fam.kind = PathKind::Signature;
      char id[16];
      std::snprintf(id, sizeof(id), "signature%02d", g + 1);
      fam.gesture_id = id;
      fam.subject_id = std::string("subject-") + id;
      fam.shape_seed = seed * 1000003ULL + static_cast<std::uint64_t>(g);
      NoiseModel noise;
      noise.positional_sigma_px = 16.0;
      noise.seed = seed * 7919ULL + static_cast<std::uint64_t>(g);
      for (const auto& t : generate(fam, noise, 17)) corpus[id].push_back(resample(t));
    }
    thresholds.push_back(template_count_study(corpus, counts).front().report.eer_threshold);
  }
  std::sort(thresholds.begin(), thresholds.end());
  const double median = 0.5 * (thresholds[4] + thresholds[5]);
  CHECK(kCalibratedThreshold == doctest::Approx(median).epsilon(1e-5));
}

TEST_CASE("template store persists the latest set bit-exactly") {
  TempDir dir;
  std::mt19937_64 rng(1);
  std::vector<ResampledTrace> reps;
  for (int k = 0; k < 3; ++k) reps.push_back(gktest::uniform_trace({gktest::random_stroke(rng, 40)}));
  const TemplateSet first = build_template_set("a/b c", reps);
  const TemplateSet second = build_template_set("a/b c", std::span(reps).first(2));
  {
    TemplateStore store(dir.path);
    CHECK_FALSE(store.contains("a/b c"));
    store.put(first);
    store.put(second);
    CHECK(store.get("a/b c")->templates.size() == 2);
  }
  CHECK(TemplateStore::file_name_for("a/b c") == "a%2Fb%20c.jsonl");
  CHECK(TemplateStore::file_name_for("..") == "%2E..jsonl");
  TemplateStore reopened(dir.path);
  const auto got = reopened.get("a/b c");
  REQUIRE(got);
  REQUIRE(got->templates.size() == 2);
  for (std::size_t t = 0; t < 2; ++t) {
    CHECK(got->templates[t].strokes[0].points == second.templates[t].strokes[0].points);
  }
  CHECK(reopened.gesture_ids() == std::vector<std::string>{"a/b c"});
  // two appended records
  std::ifstream in(dir.path / "a%2Fb%20c.jsonl");
  const auto lines = std::count(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>(), '\n');
  CHECK(lines == 2);
}

TEST_CASE("enrollment flow") {
  TempDir dir;
  Service svc(config_in(dir.path));

  SUBCASE("fresh id starts a session, duplicates conflict") {
    const Response r = svc.enroll_start(start_body("g1"), false);
    CHECK(r.status == 200);
    CHECK(r.body["session_id"].is_string());
    CHECK(svc.enroll_start(start_body("g1"), false).status == 409);  // in progress
    CHECK(svc.enroll_start(start_body("g1"), true).status == 200);
    CHECK(svc.enroll_start(start_body("g2", 0), false).status == 422);
    CHECK(svc.enroll_start(start_body("g2", 11), false).status == 422);
    CHECK(svc.enroll_start("{not json", false).status == 400);
  }

  SUBCASE("ten traces complete and persist the set") {
    const auto traces = synth_traces(PathKind::Signature, 10, 3);
    const Response last = enroll(svc, "sig", traces);
    CHECK(last.body["complete"] == true);
    CHECK(last.body["remaining"] == 0);
    CHECK(last.body["template_count"] == 10);
    CHECK(last.body["security"]["mean_bits"].get<double>() > 30.0);
    CHECK(last.body["security"]["band"] == "strong");
    CHECK(last.body["security"]["band_basis"] == "heuristic");
    CHECK(svc.enroll_start(start_body("sig"), false).status == 409);

    const auto stored = svc.store().get("sig");
    REQUIRE(stored);
    Service restarted(config_in(dir.path));
    const auto reloaded = restarted.store().get("sig");
    REQUIRE(reloaded);
    CHECK(to_json(*reloaded).dump() == to_json(*stored).dump());
    for (std::size_t t = 0; t < stored->templates.size(); ++t) {
      CHECK(reloaded->templates[t].strokes[0].points == stored->templates[t].strokes[0].points);
    }
  }

  SUBCASE("intermediate responses count down") {
    const auto traces = synth_traces(PathKind::Circle, 3, 4);
    const Response start = svc.enroll_start(start_body("c", 3), false);
    const std::string sid = start.body["session_id"];
    const Response r1 = svc.enroll_trace(sid, serialize_trace(traces[0]));
    CHECK(r1.body["accepted"] == true);
    CHECK(r1.body["remaining"] == 2);
    CHECK(r1.body["complete"] == false);
  }

  SUBCASE("a finger-count change is rejected with an explanation") {
    const Response start = svc.enroll_start(start_body("m", 3), false);
    const std::string sid = start.body["session_id"];
    CHECK(svc.enroll_trace(sid, serialize_trace(synth_traces(PathKind::Circle, 1, 1, 1)[0])).status == 200);
    const Response bad = svc.enroll_trace(sid, serialize_trace(synth_traces(PathKind::Circle, 1, 2, 2)[0]));
    CHECK(bad.status == 422);
    CHECK(bad.body["error"] == "finger_count_mismatch");
    CHECK(bad.body["message"].get<std::string>().find("2 finger") != std::string::npos);
  }

  SUBCASE("unknown session and invalid trace") {
    CHECK(svc.enroll_trace("nope", "{}").status == 404);
    const Response start = svc.enroll_start(start_body("x", 2), false);
    const std::string sid = start.body["session_id"];
    const Response bad = svc.enroll_trace(sid, R"({"gesture_id": "x"})");
    CHECK(bad.status == 422);
    CHECK(bad.body["error"] == "invalid_trace");
    CHECK(bad.body.contains("message"));
  }

  SUBCASE("near-identical straight lines are weak") {
    const auto traces = synth_traces(PathKind::Line, 10, 5, 1, 0.5);
    const Response last = enroll(svc, "line", traces);
    CHECK(last.body["security"]["mean_bits"].get<double>() < 15.0);
    CHECK(last.body["security"]["band"] == "weak");
  }

  SUBCASE("a single repetition gives a single template") {
    const Response last = enroll(svc, "one", synth_traces(PathKind::Zigzag, 1, 6));
    CHECK(last.body["complete"] == true);
    CHECK(last.body["template_count"] == 1);
    CHECK(last.body["security"].is_null());
    CHECK(last.body["warnings"].size() == 1);
  }
}

TEST_CASE("security bands") {
  CHECK(security_band(3.0) == "weak");
  CHECK(security_band(15.0) == "moderate");
  CHECK(security_band(30.0) == "moderate");
  CHECK(security_band(30.5) == "strong");
}

TEST_CASE("authentication endpoint") {
  TempDir dir;
  Service svc(config_in(dir.path));
  const auto traces = synth_traces(PathKind::Signature, 17, 7);
  enroll(svc, "sig", std::vector<GestureTrace>(traces.begin(), traces.begin() + 10));

  const Response genuine = svc.auth(auth_body("sig", traces[11]));
  CHECK(genuine.status == 200);
  CHECK(genuine.body["accepted"] == true);
  CHECK(genuine.body["threshold"] == kCalibratedThreshold);

  const Response other = svc.auth(auth_body("sig", synth_traces(PathKind::Zigzag, 1, 8)[0]));
  CHECK(other.body["accepted"] == false);

  const Response two = svc.auth(auth_body("sig", synth_traces(PathKind::Signature, 1, 9, 2)[0]));
  CHECK(two.status == 200);
  CHECK(two.body["accepted"] == false);
  CHECK(two.body["score"] == 0.0);

  CHECK(svc.auth(auth_body("missing", traces[11])).status == 404);
  CHECK(svc.auth(json{{"gesture_id", "sig"}, {"trace", {{"bad", 1}}}}.dump()).status == 422);
  const Response strict =
      svc.auth(json{{"gesture_id", "sig"}, {"trace", to_json(traces[11])}, {"threshold", 1e9}}.dump());
  CHECK(strict.body["accepted"] == false);
  CHECK(svc.auth(json{{"gesture_id", "sig"}, {"trace", to_json(traces[11])}, {"threshold", -1}}.dump()).status ==
        422);
}

TEST_CASE("mutual information endpoint") {
  TempDir dir;
  Service svc(config_in(dir.path));
  const auto traces = synth_traces(PathKind::Signature, 2, 10);

  const Response self = svc.analyze_mi(json{{"traces", {to_json(traces[0]), to_json(traces[0])}}}.dump());
  REQUIRE(self.status == 200);
  const auto expected = mutual_information(resample(traces[0]), resample(traces[0]));
  CHECK(self.body["total_bits"] == expected.total_bits);

  // independent noise traces
  std::mt19937_64 rng(11);
  double sum = 0.0;
  for (int k = 0; k < 10; ++k) {
    std::vector<double> times;
    for (int i = 0; i < 700; ++i) times.push_back(i * 5.0);
    const auto a = gktest::raw_trace(times, {gktest::white_noise_path(rng, 700, 20.0)});
    const auto b = gktest::raw_trace(times, {gktest::white_noise_path(rng, 700, 20.0)});
    const Response r = svc.analyze_mi(json{{"traces", {to_json(a), to_json(b)}}}.dump());
    REQUIRE(r.status == 200);
    sum += r.body["total_bits"].get<double>();
  }
  CHECK(sum / 10.0 < 3.0);

  const auto two = synth_traces(PathKind::Signature, 1, 12, 2);
  const Response mixed = svc.analyze_mi(json{{"traces", {to_json(traces[0]), to_json(two[0])}}}.dump());
  CHECK(mixed.status == 422);
  CHECK(mixed.body["error"] == "incomparable");
  CHECK(svc.analyze_mi(json{{"traces", {to_json(traces[0])}}}.dump()).status == 422);
  CHECK(svc.analyze_mi(json{{"traces", {to_json(traces[0]), {{"x", 1}}}}}.dump()).status == 422);
}

TEST_CASE("http service over loopback") {
  TempDir dir;
  Service svc(config_in(dir.path));
  httplib::Server server;
  svc.mount(server);
  const int port = server.bind_to_any_port("127.0.0.1");
  REQUIRE(port > 0);
  std::thread thread([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  httplib::Client client("127.0.0.1", port);
  const auto traces = synth_traces(PathKind::Signature, 17, 13, 3);

  auto start = client.Post("/enroll/start", start_body("three"), "application/json");
  REQUIRE(start);
  CHECK(start->status == 200);
  CHECK(start->get_header_value("Content-Type") == "application/json");
  const std::string sid = json::parse(start->body)["session_id"];
  for (int k = 0; k < 10; ++k) {
    auto r = client.Post("/enroll/" + sid + "/trace", serialize_trace(traces[static_cast<std::size_t>(k)]),
                         "application/json");
    REQUIRE(r);
    CHECK(r->status == 200);
  }
  auto dup = client.Post("/enroll/start", start_body("three"), "application/json");
  CHECK(dup->status == 409);
  CHECK(client.Post("/enroll/start?overwrite=true", start_body("three"), "application/json")->status == 200);
  CHECK(client.Post("/enroll/unknown/trace", "{}", "application/json")->status == 404);

  // 10 templates x 3 fingers under the latency budget
  const std::string body = auth_body("three", traces[12]);
  double worst_ms = 0.0;
  json serial;
  for (int k = 0; k < 5; ++k) {
    const auto t0 = std::chrono::steady_clock::now();
    auto r = client.Post("/auth", body, "application/json");
    const auto t1 = std::chrono::steady_clock::now();
    REQUIRE(r);
    CHECK(r->status == 200);
    serial = json::parse(r->body);
    worst_ms = std::max(worst_ms, std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  CHECK(worst_ms < 50.0);
  CHECK(serial["accepted"] == true);

  // concurrent requests agree with serial ones
  std::vector<std::string> bodies;
  std::vector<std::string> expected;
  for (std::size_t k = 10; k < 17; ++k) {
    bodies.push_back(auth_body("three", traces[k]));
    expected.push_back(client.Post("/auth", bodies.back(), "application/json")->body);
  }
  std::vector<std::future<std::string>> jobs;
  for (int round = 0; round < 4; ++round) {
    for (const auto& b : bodies) {
      jobs.push_back(std::async(std::launch::async, [port, b] {
        httplib::Client c("127.0.0.1", port);
        auto r = c.Post("/auth", b, "application/json");
        return r ? r->body : std::string("transport error");
      }));
    }
  }
  for (std::size_t k = 0; k < jobs.size(); ++k) {
    CHECK(jobs[k].get() == expected[k % bodies.size()]);
  }

  auto mi = client.Post("/analyze/mi", json{{"traces", {to_json(traces[0]), to_json(traces[1])}}}.dump(),
                        "application/json");
  REQUIRE(mi);
  CHECK(mi->status == 200);
  CHECK(json::parse(mi->body)["retained_k"].get<int>() >= 1);

  server.stop();
  thread.join();
}
