#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "scoreprobe/config.h"
#include "scoreprobe/report.h"
#include "scoreprobe/scoring.h"
#include "scoreprobe/stats.h"

namespace scoreprobe {

// Counts live calls through to the wrapped scorer. Cache hits never reach
// it, which is exactly what the cache-effectiveness contract measures.
class CountingScorer : public Scorer {
 public:
  explicit CountingScorer(std::unique_ptr<Scorer> inner) : inner_(std::move(inner)) {}
  const std::string& scorer_id() const override { return inner_->scorer_id(); }
  double score(const Item& item, const std::string& text) override {
    calls_.fetch_add(1, std::memory_order_relaxed);
    return inner_->score(item, text);
  }
  size_t calls() const { return calls_.load(std::memory_order_relaxed); }

 private:
  std::unique_ptr<Scorer> inner_;
  std::atomic<size_t> calls_{0};
};

struct ConditionReport {
  std::string label;
  PairedEffectReport effect;
  double mean_word_count = 0.0;
  FloorRate floor;
  std::optional<double> cer;                  // spelling-noise conditions
  std::optional<ReadabilityRow> readability;  // rephrase conditions
};

struct ExperimentOutcome {
  std::string name;
  ExperimentKind kind = ExperimentKind::kDuplicate;
  std::vector<ReportRow> rows;  // baseline first
  std::vector<ConditionReport> conditions;
  std::vector<std::string> files;  // artifact names, relative to output_dir
};

struct HarnessReport {
  std::vector<ExperimentOutcome> experiments;
  size_t n_sampled = 0;
  size_t scorer_calls = 0;  // live calls this run; never persisted
  uint64_t config_hash = 0;
  uint64_t corpus_hash = 0;
  bool complete = true;
  std::string output_dir;
};

// Full pipeline: corpus -> baseline scoring -> sampling -> per-experiment
// variants -> scoring -> paired statistics -> report files + manifest.json.
// When an experiment fails mid-run, finished experiments keep their files,
// the manifest records which experiment failed, and the error propagates.
HarnessReport run_experiment(const ExperimentConfig& config);

// Stage entry points mirroring the CLI subcommands.

// Baseline scoring + stratification; writes sample.csv. Returns the sampled
// response ids in scoring order.
std::vector<std::string> run_sample_stage(const ExperimentConfig& config);

// Variant generation only (whole corpus, no sampling, no scoring); writes
// variants_<name>.jsonl per experiment. Returns the written file names.
std::vector<std::string> run_perturb_stage(const ExperimentConfig& config);

// Baseline + variant scoring into the cache, no statistics. Returns the
// number of live scorer calls. Requires a persistent cache path.
size_t run_score_stage(const ExperimentConfig& config);

// Effect sizes from published-style summary rows (no per-pair data, so no
// bootstrap CIs). The fixture is JSON:
//   {"title": ..., "baseline": {"label", "mean", "sd", "mean_word_count"?,
//    "floor_rate"?}, "rows": [like baseline...]}
struct SummaryAnalysis {
  std::string title;
  std::vector<ReportRow> rows;  // baseline first
};
SummaryAnalysis analyze_summaries(const std::string& fixture_json);

}  // namespace scoreprobe
