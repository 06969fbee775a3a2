#include "scoreprobe/corpus.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <unordered_set>
#include <utility>

#include "json.hpp"

#include "scoreprobe/error.h"
#include "scoreprobe/prng.h"

namespace scoreprobe {

using nlohmann::json;

std::string to_string(ItemFormat format) {
  return format == ItemFormat::kText ? "text" : "video";
}

ItemFormat item_format_from_string(const std::string& s) {
  if (s == "text") return ItemFormat::kText;
  if (s == "video") return ItemFormat::kVideo;
  throw ValidationError("unknown item format '" + s + "' (expected \"text\" or \"video\")");
}

Corpus::Corpus(std::vector<Item> items, std::vector<Response> responses)
    : items_(std::move(items)), responses_(std::move(responses)) {
  for (size_t i = 0; i < items_.size(); ++i) {
    if (!item_index_.emplace(items_[i].item_id, i).second) {
      throw ValidationError("duplicate item_id '" + items_[i].item_id + "'");
    }
  }
  for (size_t i = 0; i < responses_.size(); ++i) {
    if (!response_index_.emplace(responses_[i].response_id, i).second) {
      throw ValidationError("duplicate response_id '" + responses_[i].response_id + "'");
    }
  }
  validate();
}

void Corpus::validate() const {
  for (const Item& it : items_) {
    if (it.item_id.empty()) throw ValidationError("item with empty item_id");
    if (it.competency.empty())
      throw ValidationError("item '" + it.item_id + "' has empty competency");
    if (it.question_text.empty())
      throw ValidationError("item '" + it.item_id + "' has empty question_text");
  }
  for (const Response& r : responses_) {
    if (r.response_id.empty()) throw ValidationError("response with empty response_id");
    if (item_index_.find(r.item_id) == item_index_.end()) {
      throw ValidationError("response '" + r.response_id +
                            "' references unknown item '" + r.item_id + "'");
    }
  }
}

const Item* Corpus::find_item(const std::string& item_id) const {
  auto it = item_index_.find(item_id);
  return it == item_index_.end() ? nullptr : &items_[it->second];
}

const Item& Corpus::item(const std::string& item_id) const {
  const Item* it = find_item(item_id);
  if (!it) throw ValidationError("unknown item '" + item_id + "'");
  return *it;
}

const Response* Corpus::find_response(const std::string& response_id) const {
  auto it = response_index_.find(response_id);
  return it == response_index_.end() ? nullptr : &responses_[it->second];
}

namespace {

std::string require_string(const json& obj, const char* field, int line_no) {
  auto it = obj.find(field);
  if (it == obj.end() || !it->is_string()) {
    throw ValidationError("corpus line " + std::to_string(line_no) +
                          ": missing or non-string field '" + field + "'");
  }
  return it->get<std::string>();
}

}  // namespace

Corpus load_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open corpus file '" + path + "'");

  std::vector<Item> items;
  std::vector<Response> responses;
  std::string line;
  int line_no = 0;
  bool saw_record = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ValidationError("corpus line " + std::to_string(line_no) +
                            ": malformed JSON: " + e.what());
    }
    if (!obj.is_object()) {
      throw ValidationError("corpus line " + std::to_string(line_no) + ": not a JSON object");
    }
    const std::string kind = require_string(obj, "kind", line_no);
    if (kind == "item") {
      Item it;
      it.item_id = require_string(obj, "item_id", line_no);
      it.competency = require_string(obj, "competency", line_no);
      it.scenario_text = obj.value("scenario_text", std::string());
      it.question_text = require_string(obj, "question_text", line_no);
      it.format = item_format_from_string(obj.value("format", std::string("text")));
      it.scenario_summary = obj.value("scenario_summary", std::string());
      items.push_back(std::move(it));
    } else if (kind == "response") {
      Response r;
      r.response_id = require_string(obj, "response_id", line_no);
      r.item_id = require_string(obj, "item_id", line_no);
      r.student_id = obj.value("student_id", std::string());
      r.text = require_string(obj, "text", line_no);
      responses.push_back(std::move(r));
    } else {
      throw ValidationError("corpus line " + std::to_string(line_no) +
                            ": unknown kind '" + kind + "'");
    }
    saw_record = true;
  }
  if (!saw_record) throw ValidationError("corpus file '" + path + "' is empty");
  return Corpus(std::move(items), std::move(responses));
}

double ScoreBinning::edge(int k) const {
  return (lo * n_bins + (hi - lo) * k) / n_bins;
}

std::vector<double> ScoreBinning::edges() const {
  std::vector<double> out(n_bins + 1);
  for (int k = 0; k <= n_bins; ++k) out[k] = edge(k);
  return out;
}

std::string ScoreBinning::bin_label(int bin) const {
  auto fmt = [](double v) {
    std::string s = std::to_string(v);
    s.erase(s.find_last_not_of('0') + 1);
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
  };
  if (bin == 0) return "[" + fmt(edge(0)) + ", " + fmt(edge(1)) + "]";
  return "(" + fmt(edge(bin)) + ", " + fmt(edge(bin + 1)) + "]";
}

int bin_of(double score, const ScoreBinning& binning) {
  if (!(score >= binning.lo && score <= binning.hi)) {
    throw ValidationError("score " + std::to_string(score) + " outside [" +
                          std::to_string(binning.lo) + ", " + std::to_string(binning.hi) + "]");
  }
  for (int k = 0; k < binning.n_bins; ++k) {
    if (score <= binning.edge(k + 1)) return k;
  }
  return binning.n_bins - 1;
}

std::vector<std::string> stratified_sample(
    const Corpus& corpus,
    const std::unordered_map<std::string, double>& baseline_scores,
    int per_bin_per_item_cap, uint64_t seed, const ScoreBinning& binning) {
  if (per_bin_per_item_cap < 1) throw ValidationError("per_bin_per_item_cap must be >= 1");

  // (item_id, bin) -> member response ids. std::map keeps cell visit order
  // deterministic.
  std::map<std::pair<std::string, int>, std::vector<std::string>> cells;
  for (const Response& r : corpus.responses()) {
    auto it = baseline_scores.find(r.response_id);
    if (it == baseline_scores.end()) {
      throw ValidationError("missing baseline score for response '" + r.response_id + "'");
    }
    cells[{r.item_id, bin_of(it->second, binning)}].push_back(r.response_id);
  }

  SeededPrng prng(seed);
  std::vector<std::string> selected;
  for (auto& [key, members] : cells) {
    std::sort(members.begin(), members.end());
    const size_t take = std::min<size_t>(per_bin_per_item_cap, members.size());
    // Partial Fisher-Yates: the first `take` slots are a uniform draw
    // without replacement.
    for (size_t j = 0; j < take; ++j) {
      size_t k = j + prng.next_below(members.size() - j);
      std::swap(members[j], members[k]);
    }
    selected.insert(selected.end(), members.begin(), members.begin() + take);
  }
  return selected;
}

}  // namespace scoreprobe
