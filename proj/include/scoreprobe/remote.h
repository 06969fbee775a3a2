#pragma once

#include <memory>
#include <string>

#include "scoreprobe/rephrase.h"
#include "scoreprobe/scoring.h"

namespace scoreprobe {

// HTTP client for a live scoring service. POSTs JSON to <endpoint>/v1/score:
//   {item_id, competency, scenario_text, question_text, response_text}
// and expects {"score": <number in [1,5]>}. Connect errors, timeouts, and
// non-2xx statuses are transport failures, retried with exponential backoff
// up to max_retries. A malformed body or an out-of-range verdict is a hard
// failure and is never retried.
class RemoteScorer : public Scorer {
 public:
  explicit RemoteScorer(ScorerConfig config, int backoff_base_ms = 100);
  const std::string& scorer_id() const override { return config_.scorer_id; }
  double score(const Item& item, const std::string& text) override;

 private:
  ScorerConfig config_;
  int backoff_base_ms_;
};

std::unique_ptr<Scorer> make_remote_scorer(const ScorerConfig& config);

struct RemoteRephraserConfig {
  std::string endpoint;  // base URL, no path
  int timeout_ms = 10000;
  int max_retries = 3;
};

// HTTP client for a rephrasing service. POSTs to <endpoint>/v1/rephrase:
//   {"text": ..., "direction": "lower"|"higher"}   or
//   {"text": ..., "target_rgl": <number>}
// and expects {"text": <nonempty string>}. Retry policy matches RemoteScorer.
class RemoteRephraser : public Rephraser {
 public:
  RemoteRephraser(std::string id, RemoteRephraserConfig config, int backoff_base_ms = 100);
  std::string id() const override { return id_; }
  std::string rephrase(const std::string& text, const RephraseRglSpec& spec) override;

 private:
  std::string id_;
  RemoteRephraserConfig config_;
  int backoff_base_ms_;
};

}  // namespace scoreprobe
