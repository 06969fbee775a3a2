#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>

#include "scoreprobe/scoring.h"

namespace scoreprobe {

// Append-only JSONL store of ScoreRecords keyed by
// (scorer_id, item_id, response_hash). A corrupt trailing partial line is
// tolerated on reload (interrupted append); corruption anywhere earlier is
// an error. One writer at a time; lookups are read-only after open.
class ScoreCache {
 public:
  ScoreCache() = default;
  ScoreCache(ScoreCache&& other) noexcept
      : path_(std::move(other.path_)), records_(std::move(other.records_)) {}
  ScoreCache& operator=(ScoreCache&& other) noexcept {
    path_ = std::move(other.path_);
    records_ = std::move(other.records_);
    return *this;
  }

  // Loads the file when it exists; otherwise starts empty and creates it on
  // first append. An empty path keeps the cache purely in memory.
  static ScoreCache open(const std::string& path);

  std::optional<ScoreRecord> lookup(const std::string& scorer_id,
                                    const std::string& item_id,
                                    uint64_t response_hash) const;

  void append(const ScoreRecord& record);

  size_t size() const { return records_.size(); }
  const std::string& path() const { return path_; }

 private:
  using Key = std::tuple<std::string, std::string, uint64_t>;

  std::string path_;
  std::map<Key, ScoreRecord> records_;
  mutable std::mutex mutex_;
};

std::string score_record_to_json(const ScoreRecord& record);
ScoreRecord score_record_from_json(const std::string& line);

// Current UTC time as ISO-8601, for ScoreRecord::scored_at.
std::string now_iso8601();

}  // namespace scoreprobe
