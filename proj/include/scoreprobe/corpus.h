#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace scoreprobe {

enum class ItemFormat { kText, kVideo };

std::string to_string(ItemFormat format);
ItemFormat item_format_from_string(const std::string& s);

struct Item {
  std::string item_id;
  std::string competency;
  std::string scenario_text;
  std::string question_text;
  ItemFormat format = ItemFormat::kText;
  // Human-written one-sentence summary of the scenario; corpus data, used
  // by the scenario-rephrase append variant. Empty when not provided.
  std::string scenario_summary;
};

struct Response {
  std::string response_id;
  std::string item_id;
  std::string student_id;
  std::string text;
};

// Immutable after construction; validation happens in the constructor so a
// Corpus in hand is always internally consistent.
class Corpus {
 public:
  Corpus() = default;
  Corpus(std::vector<Item> items, std::vector<Response> responses);

  const std::vector<Item>& items() const { return items_; }
  const std::vector<Response>& responses() const { return responses_; }

  const Item* find_item(const std::string& item_id) const;
  const Item& item(const std::string& item_id) const;  // throws if absent
  const Response* find_response(const std::string& response_id) const;

 private:
  void validate() const;

  std::vector<Item> items_;
  std::vector<Response> responses_;
  std::unordered_map<std::string, size_t> item_index_;
  std::unordered_map<std::string, size_t> response_index_;
};

// Reads the JSONL corpus format: one object per line, tagged
// "kind": "item" | "response". Items may appear after the responses that
// reference them; references are resolved at end of load.
Corpus load_corpus(const std::string& path);

// Ten equal-width bins over [1, 5]. The first bin is closed on both ends,
// the rest are half-open (lo, hi].
struct ScoreBinning {
  double lo = 1.0;
  double hi = 5.0;
  int n_bins = 10;

  // Edge k computed as (lo*n + (hi-lo)*k)/n in one rounding step, so that
  // scores parsed from the same decimal text compare exactly.
  double edge(int k) const;
  std::vector<double> edges() const;
  std::string bin_label(int bin) const;
};

int bin_of(double score, const ScoreBinning& binning = {});

// Up to `cap` responses per (item, bin) cell, chosen uniformly without
// replacement by Fisher-Yates on the cell sorted by response_id. One shared
// generator drives the whole pass; cells are visited in (item_id, bin)
// order, so the result depends only on (corpus, scores, cap, seed).
std::vector<std::string> stratified_sample(
    const Corpus& corpus,
    const std::unordered_map<std::string, double>& baseline_scores,
    int per_bin_per_item_cap, uint64_t seed, const ScoreBinning& binning = {});

}  // namespace scoreprobe
