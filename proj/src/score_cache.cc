#include "scoreprobe/score_cache.h"

#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <system_error>

#include "json.hpp"

#include "scoreprobe/error.h"

namespace scoreprobe {

using nlohmann::json;

std::string score_record_to_json(const ScoreRecord& record) {
  char hash_hex[17];
  std::snprintf(hash_hex, sizeof(hash_hex), "%016" PRIx64, record.response_hash);
  json obj{{"scorer_id", record.scorer_id},
           {"item_id", record.item_id},
           {"variant_id", record.variant_id},
           {"response_hash", hash_hex},
           {"score", record.score},
           {"scored_at", record.scored_at}};
  return obj.dump();
}

ScoreRecord score_record_from_json(const std::string& line) {
  json obj = json::parse(line);
  ScoreRecord rec;
  rec.scorer_id = obj.at("scorer_id").get<std::string>();
  rec.item_id = obj.at("item_id").get<std::string>();
  rec.variant_id = obj.at("variant_id").get<std::string>();
  const std::string hex = obj.at("response_hash").get<std::string>();
  rec.response_hash = std::strtoull(hex.c_str(), nullptr, 16);
  rec.score = obj.at("score").get<double>();
  rec.scored_at = obj.value("scored_at", std::string());
  return rec;
}

std::string now_iso8601() {
  std::time_t t = std::time(nullptr);
  std::tm tm_utc{};
  gmtime_r(&t, &tm_utc);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

ScoreCache ScoreCache::open(const std::string& path) {
  ScoreCache cache;
  cache.path_ = path;
  if (path.empty()) return cache;

  std::ifstream in(path, std::ios::binary);
  if (!in) return cache;  // not created yet

  std::string line;
  std::string pending_error;
  int line_no = 0;
  int error_line = 0;
  std::streamoff line_start = 0;
  std::streamoff bad_line_start = 0;
  while (true) {
    line_start = in.tellg();
    if (!std::getline(in, line)) break;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    // A parse failure is only acceptable on the final nonempty line
    // (interrupted append); remember it and fail if more records follow.
    if (!pending_error.empty()) {
      throw ValidationError("score cache '" + path + "' corrupt at line " +
                            std::to_string(error_line) + ": " + pending_error);
    }
    try {
      ScoreRecord rec = score_record_from_json(line);
      cache.records_[{rec.scorer_id, rec.item_id, rec.response_hash}] = rec;
    } catch (const std::exception& e) {
      pending_error = e.what();
      error_line = line_no;
      bad_line_start = line_start;
    }
  }
  in.close();
  if (!pending_error.empty()) {
    // Drop the interrupted tail so future appends start on a clean line.
    std::error_code ec;
    std::filesystem::resize_file(path, static_cast<uintmax_t>(bad_line_start), ec);
    if (ec) {
      throw RuntimeFailure("cannot truncate partial record in score cache '" + path +
                           "': " + ec.message());
    }
  }
  return cache;
}

std::optional<ScoreRecord> ScoreCache::lookup(const std::string& scorer_id,
                                              const std::string& item_id,
                                              uint64_t response_hash) const {
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = records_.find({scorer_id, item_id, response_hash});
  if (it == records_.end()) return std::nullopt;
  return it->second;
}

void ScoreCache::append(const ScoreRecord& record) {
  std::lock_guard<std::mutex> lock(mutex_);
  records_[{record.scorer_id, record.item_id, record.response_hash}] = record;
  if (path_.empty()) return;
  std::ofstream out(path_, std::ios::app);
  if (!out) throw RuntimeFailure("cannot append to score cache '" + path_ + "'");
  out << score_record_to_json(record) << "\n";
  out.flush();
  if (!out) throw RuntimeFailure("write to score cache '" + path_ + "' failed");
}

}  // namespace scoreprobe
