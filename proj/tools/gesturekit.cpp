#include "gesturekit/config.hpp"
#include "gesturekit/corpus.hpp"
#include "gesturekit/evaluation.hpp"
#include "gesturekit/infocap.hpp"
#include "gesturekit/report.hpp"
#include "gesturekit/service.hpp"
#include "gesturekit/synth.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <future>
#include <iostream>
#include <sstream>

namespace gk = gesturekit;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

gk::Config config_or_default(const std::string& path) { return path.empty() ? gk::Config{} : gk::load_config(path); }

void print_failures(const std::vector<gk::LoadFailure>& failures) {
  for (const auto& f : failures) {
    std::cerr << "skipped " << f.source << ": " << f.message << '\n';
  }
}

gk::Corpus load_corpus(const std::string& dir) {
  auto loaded = gk::load_traces(dir);
  gk::Corpus corpus = gk::build_corpus(loaded.traces, loaded.failures);
  print_failures(loaded.failures);
  if (corpus.empty()) {
    throw std::runtime_error("no usable traces in " + dir);
  }
  return corpus;
}

int run_analyze(const std::string& corpus_dir, const std::string& config_path, const std::string& out_dir,
                bool as_json) {
  const gk::Config config = config_or_default(config_path);
  const gk::Corpus corpus = load_corpus(corpus_dir);

  std::vector<std::string> ids;
  std::vector<std::future<gk::GestureReport>> jobs;
  for (const auto& [id, traces] : corpus) {
    ids.push_back(id);
    jobs.push_back(std::async(std::launch::async, [&traces = traces, &config] {
      return gk::analyze_gesture(traces, config.mi);
    }));
  }
  std::vector<gk::GestureReport> reports;
  int skipped = 0;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    try {
      reports.push_back(jobs[i].get());
    } catch (const std::exception& e) {
      std::cerr << "gesture " << ids[i] << " not analyzed: " << e.what() << '\n';
      ++skipped;
    }
  }
  if (reports.empty()) {
    throw std::runtime_error("no gesture could be analyzed");
  }

  const fs::path out(out_dir);
  fs::create_directories(out / "reports");
  for (const auto& r : reports) {
    gk::write_file_atomic(out / "reports" / (r.gesture_id + ".json"), gk::to_json(r).dump(2) + "\n");
  }
  gk::write_file_atomic(out / "summary.csv", gk::summary_csv(reports));
  gk::write_file_atomic(out / "mi_histogram.csv", gk::mi_histogram_csv(reports));
  gk::write_file_atomic(out / "mi_vs_repetition.csv", gk::mi_vs_repetition_csv(reports));
  gk::write_file_atomic(out / "duration_vs_repetition.csv", gk::duration_vs_repetition_csv(reports));

  if (as_json) {
    json all = json::array();
    for (const auto& r : reports) all.push_back(gk::to_json(r));
    std::cout << all.dump(2) << '\n';
  } else {
    std::cout << gk::summary_csv(reports);
  }
  if (skipped > 0) std::cerr << skipped << " gesture(s) skipped\n";
  return 0;
}

std::vector<std::size_t> parse_counts(const std::string& text) {
  std::vector<std::size_t> counts;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t pos = 0;
    const long long v = std::stoll(item, &pos);
    if (pos != item.size() || v < 1 || v > static_cast<long long>(gk::kMaxTemplates)) {
      throw CLI::ValidationError("--templates", "counts must be integers from 1 to 10, got '" + item + "'");
    }
    counts.push_back(static_cast<std::size_t>(v));
  }
  if (counts.empty()) throw CLI::ValidationError("--templates", "no template counts given");
  return counts;
}

int run_roc(const std::string& corpus_dir, const std::string& templates, int set, const std::string& config_path,
            const std::string& out_dir, bool as_json) {
  const gk::Config config = config_or_default(config_path);
  const auto counts = parse_counts(templates);
  const gk::Corpus corpus = load_corpus(corpus_dir);
  const auto group = set == 2 ? gk::RepetitionGroup::Recall2 : gk::RepetitionGroup::Recall1;
  const auto results = gk::template_count_study(corpus, counts, group, config.rotation_invariant);

  const fs::path out(out_dir);
  fs::create_directories(out);
  for (const auto& r : results) {
    gk::write_file_atomic(out / ("roc_n" + std::to_string(r.n_templates) + ".csv"), gk::roc_csv(r.report));
  }
  gk::write_file_atomic(out / "eer.csv", gk::eer_csv(results));
  const json doc = gk::to_json(std::span<const gk::TemplateCountResult>(results));
  gk::write_file_atomic(out / "roc.json", doc.dump(2) + "\n");

  if (as_json) {
    std::cout << doc.dump(2) << '\n';
  } else {
    std::cout << gk::eer_csv(results);
  }
  return 0;
}

struct SynthOptions {
  std::string family = "zigzag";
  int turns = 8;
  int reps = 17;
  std::uint64_t seed = 7;
  std::string out_dir;
  int gestures = 1;
  int fingers = 1;
  std::string layout = "rigid";
  double sigma = 2.0;
  double duration = 2.0;
  double scale = 600.0;
  std::string id_prefix;
};

int run_synth(const SynthOptions& o) {
  static constexpr gk::PathKind kMixed[] = {gk::PathKind::Zigzag, gk::PathKind::Signature, gk::PathKind::Circle,
                                            gk::PathKind::Line};
  const bool mixed = o.family == "mixed";
  gk::GestureFamily base;
  if (!mixed) base.kind = gk::parse_path_kind(o.family);
  base.layout = gk::parse_finger_layout(o.layout);
  if (o.turns < 1) throw CLI::ValidationError("--turns", "must be at least 1");
  if (o.fingers < 1 || o.fingers > 10) throw CLI::ValidationError("--fingers", "must be from 1 to 10");
  if (o.reps < 1) throw CLI::ValidationError("--reps", "must be at least 1");
  if (o.gestures < 1) throw CLI::ValidationError("--gestures", "must be at least 1");
  if (!(o.sigma >= 0.0)) throw CLI::ValidationError("--sigma", "must be non-negative");
  if (!(o.duration > 0.0) || !(o.scale > 0.0)) throw CLI::ValidationError("--duration/--scale", "must be positive");
  base.turns = o.turns;
  base.finger_count = o.fingers;
  base.duration_s = o.duration;
  base.scale_px = o.scale;

  const fs::path out(o.out_dir);
  fs::create_directories(out);
  const std::string prefix = o.id_prefix.empty() ? (mixed ? std::string("g") : o.family) : o.id_prefix;
  int written = 0;
  for (int g = 0; g < o.gestures; ++g) {
    gk::GestureFamily family = base;
    if (mixed) family.kind = kMixed[g % 4];
    char id[64];
    if (o.gestures == 1 && !mixed) {
      std::snprintf(id, sizeof(id), "%s", prefix.c_str());
    } else {
      std::snprintf(id, sizeof(id), "%s%02d", prefix.c_str(), g + 1);
    }
    family.gesture_id = id;
    family.subject_id = std::string("subject-") + id;
    family.shape_seed = o.seed * 1000003ULL + static_cast<std::uint64_t>(g);
    gk::NoiseModel noise;
    noise.positional_sigma_px = o.sigma;
    noise.seed = o.seed * 7919ULL + static_cast<std::uint64_t>(g);
    for (const auto& trace : gk::generate(family, noise, o.reps)) {
      char name[96];
      std::snprintf(name, sizeof(name), "%s_t%02d.json", id, trace.trial_index);
      gk::write_file_atomic(out / name, gk::serialize_trace(trace) + "\n");
      ++written;
    }
  }
  std::cout << "wrote " << written << " traces to " << out.string() << '\n';
  return 0;
}

int run_mi(const std::string& a_path, const std::string& b_path, const std::string& config_path) {
  const gk::Config config = config_or_default(config_path);
  const auto a = gk::resample(gk::parse_trace(gk::read_file(a_path)));
  const auto b = gk::resample(gk::parse_trace(gk::read_file(b_path)));
  std::cout << gk::to_json(gk::mutual_information(a, b, config.mi)).dump(2) << '\n';
  return 0;
}

int run_serve(const std::string& config_path, int port, const std::string& data_dir) {
  gk::Config config = config_or_default(config_path);
  if (port > 0) config.port = port;
  if (!data_dir.empty()) config.data_dir = data_dir;
  gk::Service service(config);
  std::cerr << "listening on port " << config.port << ", data in " << config.data_dir.string() << '\n';
  gk::run_server(service);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gesture authentication toolkit: mutual-information analysis, template matching, ROC studies"};
  app.require_subcommand(1);

  std::string corpus_dir, config_path, out_dir = "out", templates = "2,4,6,8,10";
  bool as_json = false;
  int set = 1;

  auto* analyze = app.add_subcommand("analyze", "Per-gesture MI reports and aggregate CSV series");
  analyze->add_option("corpus", corpus_dir, "Directory of trace files")->required();
  analyze->add_option("--config", config_path, "Config file");
  analyze->add_option("-o,--out", out_dir, "Output directory");
  analyze->add_flag("--json", as_json, "Print reports as JSON");

  auto* roc = app.add_subcommand("roc", "EER by template count");
  roc->add_option("corpus", corpus_dir, "Directory of trace files")->required();
  roc->add_option("--templates", templates, "Comma-separated template counts");
  roc->add_option("--set", set, "Genuine recall set (1 or 2)")->check(CLI::IsMember({1, 2}));
  roc->add_option("--config", config_path, "Config file");
  roc->add_option("-o,--out", out_dir, "Output directory");
  roc->add_flag("--json", as_json, "Print results as JSON");

  SynthOptions so;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic trace corpus");
  synth->add_option("--family", so.family, "line, circle, zigzag, signature or mixed");
  synth->add_option("--turns", so.turns, "Zigzag turns");
  synth->add_option("--reps", so.reps, "Repetitions per gesture");
  synth->add_option("--seed", so.seed, "Random seed");
  synth->add_option("-o,--out", so.out_dir, "Output directory")->required();
  synth->add_option("--gestures", so.gestures, "Number of gestures");
  synth->add_option("--fingers", so.fingers, "Fingers per gesture");
  synth->add_option("--layout", so.layout, "rigid, mirrored or divergent");
  synth->add_option("--sigma", so.sigma, "Positional noise in pixels");
  synth->add_option("--duration", so.duration, "Nominal duration in seconds");
  synth->add_option("--scale", so.scale, "Path size in pixels");
  synth->add_option("--id-prefix", so.id_prefix, "Gesture id prefix");

  std::string trace_a, trace_b;
  auto* mi = app.add_subcommand("mi", "Mutual information between two traces");
  mi->add_option("trace_a", trace_a)->required();
  mi->add_option("trace_b", trace_b)->required();
  mi->add_option("--config", config_path, "Config file");

  int port = 0;
  std::string data_dir;
  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  serve->add_option("--config", config_path, "Config file");
  serve->add_option("--port", port, "Override the configured port");
  serve->add_option("--data-dir", data_dir, "Override the configured data directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*analyze) return run_analyze(corpus_dir, config_path, out_dir, as_json);
    if (*roc) return run_roc(corpus_dir, templates, set, config_path, out_dir, as_json);
    if (*synth) return run_synth(so);
    if (*mi) return run_mi(trace_a, trace_b, config_path);
    if (*serve) return run_serve(config_path, port, data_dir);
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
