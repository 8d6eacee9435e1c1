#ifndef GESTUREKIT_STORE_HPP
#define GESTUREKIT_STORE_HPP

#include "gesturekit/recognizer.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

namespace gesturekit {

/// Template sets persisted as one append-only JSON-lines file per gesture
/// under a data directory. The last record of a file is the current set.
/// Readers take a shared lock and receive copies.
class TemplateStore {
public:
  explicit TemplateStore(std::filesystem::path data_dir);

  std::optional<TemplateSet> get(const std::string& gesture_id) const;
  bool contains(const std::string& gesture_id) const;
  std::vector<std::string> gesture_ids() const;

  /// Appends a record and makes it current.
  void put(const TemplateSet& tset);

  const std::filesystem::path& data_dir() const { return data_dir_; }

  /// File name for a gesture id; characters outside [A-Za-z0-9._-] are %XX-escaped.
  static std::string file_name_for(const std::string& gesture_id);

private:
  std::filesystem::path data_dir_;
  mutable std::shared_mutex mutex_;
  std::map<std::string, TemplateSet> sets_;
};

}  // namespace gesturekit

#endif  // GESTUREKIT_STORE_HPP
