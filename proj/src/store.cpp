#include "gesturekit/store.hpp"

#include <cstdio>
#include <fstream>
#include <mutex>
#include <stdexcept>

namespace gesturekit {

namespace fs = std::filesystem;

TemplateStore::TemplateStore(fs::path data_dir) : data_dir_(std::move(data_dir)) {
  fs::create_directories(data_dir_);
  for (const auto& entry : fs::directory_iterator(data_dir_)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".jsonl") continue;
    std::ifstream in(entry.path());
    std::string line;
    std::optional<TemplateSet> latest;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto doc = nlohmann::json::parse(line, nullptr, false);
      if (doc.is_discarded()) continue;  // torn final write
      latest = template_set_from_json(doc);
    }
    if (latest) {
      std::string id = latest->gesture_id;
      sets_.insert_or_assign(std::move(id), std::move(*latest));
    }
  }
}

std::optional<TemplateSet> TemplateStore::get(const std::string& gesture_id) const {
  std::shared_lock lock(mutex_);
  auto it = sets_.find(gesture_id);
  if (it == sets_.end()) return std::nullopt;
  return it->second;
}

bool TemplateStore::contains(const std::string& gesture_id) const {
  std::shared_lock lock(mutex_);
  return sets_.count(gesture_id) != 0;
}

std::vector<std::string> TemplateStore::gesture_ids() const {
  std::shared_lock lock(mutex_);
  std::vector<std::string> ids;
  for (const auto& [id, unused] : sets_) ids.push_back(id);
  return ids;
}

void TemplateStore::put(const TemplateSet& tset) {
  const std::string line = to_json(tset).dump() + "\n";
  std::unique_lock lock(mutex_);
  std::ofstream out(data_dir_ / file_name_for(tset.gesture_id), std::ios::app | std::ios::binary);
  if (!out || !(out << line) || !out.flush()) {
    throw std::runtime_error("cannot persist template set for '" + tset.gesture_id + "'");
  }
  sets_.insert_or_assign(tset.gesture_id, tset);
}

std::string TemplateStore::file_name_for(const std::string& gesture_id) {
  std::string out;
  for (unsigned char c : gesture_id) {
    const bool safe = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' ||
                      c == '_' || (c == '.' && !out.empty());
    if (safe) {
      out.push_back(static_cast<char>(c));
    } else {
      char buf[4];
      std::snprintf(buf, sizeof(buf), "%%%02X", c);
      out += buf;
    }
  }
  return out + ".jsonl";
}

}  // namespace gesturekit
