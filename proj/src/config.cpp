#include "gesturekit/config.hpp"

#include "gesturekit/corpus.hpp"

#include <charconv>
#include <sstream>
#include <stdexcept>
#include <string>

namespace gesturekit {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::string unquote(const std::string& v) {
  if (v.size() >= 2 && (v.front() == '"' || v.front() == '\'') && v.back() == v.front()) {
    return v.substr(1, v.size() - 2);
  }
  return v;
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
    throw std::invalid_argument("config: '" + key + "' expects a number, got '" + v + "'");
  }
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw std::invalid_argument("config: '" + key + "' expects true or false, got '" + v + "'");
}

}  // namespace

Config parse_config(std::string_view text) {
  Config config;
  std::istringstream lines{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(std::string_view(stripped).substr(0, eq));
    const std::string value = unquote(trim(std::string_view(stripped).substr(eq + 1)));

    if (key == "data_dir") {
      config.data_dir = value;
    } else if (key == "default_threshold") {
      config.default_threshold = to_double(key, value);
    } else if (key == "rotation_invariant") {
      config.rotation_invariant = to_bool(key, value);
    } else if (key == "mse_cutoff_fraction") {
      config.mi.mse_cutoff_fraction = to_double(key, value);
    } else if (key == "r2_clamp") {
      config.mi.r2_clamp = to_double(key, value);
    } else if (key == "alignment_smoothing_frames") {
      config.mi.alignment_smoothing_frames = to_double(key, value);
    } else if (key == "port") {
      config.port = static_cast<int>(to_double(key, value));
    } else {
      throw std::invalid_argument("config: unknown key '" + key + "'");
    }
  }
  if (!(config.default_threshold > 0.0)) {
    throw std::invalid_argument("config: default_threshold must be positive");
  }
  if (!(config.mi.mse_cutoff_fraction > 0.0 && config.mi.mse_cutoff_fraction <= 1.0)) {
    throw std::invalid_argument("config: mse_cutoff_fraction must lie in (0, 1]");
  }
  if (!(config.mi.r2_clamp > 0.0 && config.mi.r2_clamp < 1.0)) {
    throw std::invalid_argument("config: r2_clamp must lie in (0, 1)");
  }
  return config;
}

Config load_config(const std::filesystem::path& path) { return parse_config(read_file(path)); }

}  // namespace gesturekit
