#include "gesturekit/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace gesturekit {

namespace fs = std::filesystem;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file_atomic(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path());
  }
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw std::runtime_error("cannot write " + tmp.string());
    }
    out << content;
    if (!out.flush()) {
      throw std::runtime_error("write failed for " + tmp.string());
    }
  }
  fs::rename(tmp, path);
}

namespace {

void load_document(const fs::path& file, LoadedTraces& out) {
  std::string text;
  try {
    text = read_file(file);
  } catch (const std::exception& e) {
    out.failures.push_back({file.string(), e.what()});
    return;
  }
  const auto doc = nlohmann::json::parse(text, nullptr, false);
  if (doc.is_discarded()) {
    out.failures.push_back({file.string(), "not valid JSON"});
    return;
  }
  if (doc.is_array()) {
    for (std::size_t i = 0; i < doc.size(); ++i) {
      try {
        out.traces.push_back(trace_from_json(doc[i]));
      } catch (const std::exception& e) {
        out.failures.push_back({file.string() + "[" + std::to_string(i) + "]", e.what()});
      }
    }
    return;
  }
  try {
    out.traces.push_back(trace_from_json(doc));
  } catch (const std::exception& e) {
    out.failures.push_back({file.string(), e.what()});
  }
}

}  // namespace

LoadedTraces load_traces(const fs::path& source) {
  LoadedTraces out;
  if (fs::is_directory(source)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(source)) {
      if (entry.is_regular_file() && entry.path().extension() == ".json") {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      load_document(f, out);
    }
  } else if (fs::is_regular_file(source)) {
    load_document(source, out);
  } else {
    throw std::runtime_error("corpus not found: " + source.string());
  }
  return out;
}

Corpus build_corpus(const std::vector<GestureTrace>& traces, std::vector<LoadFailure>& failures, double target_hz) {
  Corpus corpus;
  for (const auto& trace : traces) {
    try {
      corpus[trace.gesture_id].push_back(resample(trace, target_hz));
    } catch (const std::exception& e) {
      failures.push_back({trace.gesture_id + "#" + std::to_string(trace.trial_index), e.what()});
    }
  }
  for (auto& [id, list] : corpus) {
    std::stable_sort(list.begin(), list.end(), [](const auto& a, const auto& b) {
      return std::tie(a.session, a.trial_index) < std::tie(b.session, b.trial_index);
    });
  }
  return corpus;
}

}  // namespace gesturekit
