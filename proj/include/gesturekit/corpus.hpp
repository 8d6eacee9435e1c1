#ifndef GESTUREKIT_CORPUS_HPP
#define GESTUREKIT_CORPUS_HPP

#include "gesturekit/evaluation.hpp"
#include "gesturekit/trace.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace gesturekit {

struct LoadFailure {
  std::string source;
  std::string message;
};

struct LoadedTraces {
  std::vector<GestureTrace> traces;
  std::vector<LoadFailure> failures;
};

/// Reads a directory of trace files (each one trace or an array of traces,
/// visited in file-name order) or a single file holding a trace array.
/// Unreadable documents are recorded in `failures` and skipped.
LoadedTraces load_traces(const std::filesystem::path& source);

/// Resamples each trace and groups by gesture id, sorted by trial index.
/// Traces that cannot be resampled are reported in `failures`.
Corpus build_corpus(const std::vector<GestureTrace>& traces, std::vector<LoadFailure>& failures,
                    double target_hz = kDefaultRateHz);

/// Writes `content` to a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);

}  // namespace gesturekit

#endif  // GESTUREKIT_CORPUS_HPP
