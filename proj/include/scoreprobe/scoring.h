#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "scoreprobe/corpus.h"

namespace scoreprobe {

class ScoreCache;

// One scorer verdict for one (item, response text) pair on the 1-5 scale.
struct ScoreRecord {
  std::string scorer_id;
  std::string item_id;
  std::string variant_id;  // "baseline" for unaltered responses
  uint64_t response_hash = 0;
  double score = 0.0;
  std::string scored_at;  // ISO-8601 UTC; informational only
};

enum class ScorerKind { kRemote, kReference, kReplay };

// keyword -> weight, per competency.
using KeywordWeights = std::map<std::string, double>;

struct ScorerConfig {
  std::string scorer_id = "scorer";
  ScorerKind kind = ScorerKind::kReference;
  std::string endpoint;  // remote only
  int timeout_ms = 10000;
  int max_retries = 3;
  int max_in_flight = 4;
  std::string replay_path;                        // replay only
  std::map<std::string, KeywordWeights> keywords;  // reference only, by competency

  void validate() const;
};

// Boundary to the system under test. Implementations must be safe to call
// from parallel batch workers.
class Scorer {
 public:
  virtual ~Scorer() = default;
  virtual const std::string& scorer_id() const = 0;
  virtual double score(const Item& item, const std::string& text) = 0;
};

// Content hash for cache keys: item_id bytes, a 0x1F separator, then the
// exact variant text bytes. Re-pairing a response with a different item
// therefore yields a distinct entry.
uint64_t response_content_hash(const std::string& item_id, const std::string& text);

// 1 + 4 * (total weight of keywords present in the case-folded,
// punctuation-stripped text). Whole-word presence; text length and word
// order are ignored, so the score is invariant under duplication.
double reference_score(const KeywordWeights& keywords, const std::string& text);

// Deterministic offline stand-in for a remote scoring system. Looks up the
// item's competency in the keyword table.
class ReferenceScorer : public Scorer {
 public:
  ReferenceScorer(std::string scorer_id, std::map<std::string, KeywordWeights> keywords);
  const std::string& scorer_id() const override { return scorer_id_; }
  double score(const Item& item, const std::string& text) override;

 private:
  std::string scorer_id_;
  std::map<std::string, KeywordWeights> keywords_;
};

// Serves scores recorded by a previous run; errors on any miss.
class ReplayScorer : public Scorer {
 public:
  ReplayScorer(std::string scorer_id, const std::string& records_path);
  const std::string& scorer_id() const override { return scorer_id_; }
  double score(const Item& item, const std::string& text) override;

 private:
  std::string scorer_id_;
  std::map<std::pair<std::string, uint64_t>, double> by_key_;
};

// Builds the scorer described by the config (reference, replay, or remote).
std::unique_ptr<Scorer> make_scorer(const ScorerConfig& config);

// Validates the verdict: out-of-range or non-finite scores are errors,
// never clamped.
double score_one(Scorer& scorer, const Item& item, const std::string& text);

struct ScoreRequest {
  const Item* item = nullptr;
  std::string variant_id;  // "baseline" for unaltered responses
  std::string text;
};

// Raised when a batch is aborted; in-flight work is drained first and the
// requests that did complete are reported.
class BatchError : public std::runtime_error {
 public:
  BatchError(const std::string& what, std::vector<size_t> completed)
      : std::runtime_error(what), completed_(std::move(completed)) {}
  const std::vector<size_t>& completed() const { return completed_; }

 private:
  std::vector<size_t> completed_;
};

// Cache-aware batch scoring. Hits are served without scorer calls;
// misses are scored with at most max_in_flight concurrent calls, each new
// record appended to the cache exactly once. Output order equals input
// order regardless of completion order.
std::vector<ScoreRecord> score_batch(Scorer& scorer,
                                     const std::vector<ScoreRequest>& requests,
                                     ScoreCache& cache, int max_in_flight);

}  // namespace scoreprobe
