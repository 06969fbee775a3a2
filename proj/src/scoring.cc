#include "scoreprobe/scoring.h"

#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <optional>
#include <set>
#include <thread>

#include "scoreprobe/error.h"
#include "scoreprobe/prng.h"
#include "scoreprobe/remote.h"
#include "scoreprobe/score_cache.h"

namespace scoreprobe {

namespace {

std::string hash_hex(uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string fold_token(const std::string& raw) {
  std::string out;
  out.reserve(raw.size());
  for (unsigned char c : raw) {
    if (std::isalnum(c)) out.push_back(static_cast<char>(std::tolower(c)));
  }
  return out;
}

std::set<std::string> folded_word_set(const std::string& text) {
  std::set<std::string> words;
  std::string token;
  for (size_t i = 0; i <= text.size(); ++i) {
    if (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) {
      token.push_back(text[i]);
      continue;
    }
    if (!token.empty()) {
      std::string folded = fold_token(token);
      if (!folded.empty()) words.insert(std::move(folded));
      token.clear();
    }
  }
  return words;
}

}  // namespace

void ScorerConfig::validate() const {
  if (scorer_id.empty()) throw ValidationError("scorer_id must be non-empty");
  if (timeout_ms <= 0) throw ValidationError("scorer timeout_ms must be positive");
  if (max_retries < 0) throw ValidationError("scorer max_retries must be >= 0");
  if (max_in_flight < 1) throw ValidationError("scorer max_in_flight must be >= 1");
  switch (kind) {
    case ScorerKind::kRemote:
      if (endpoint.empty()) throw ValidationError("remote scorer requires an endpoint");
      break;
    case ScorerKind::kReplay:
      if (replay_path.empty()) throw ValidationError("replay scorer requires replay_path");
      break;
    case ScorerKind::kReference: {
      if (keywords.empty()) {
        throw ValidationError("reference scorer requires keywords for at least one competency");
      }
      for (const auto& [competency, weights] : keywords) {
        if (weights.empty()) {
          throw ValidationError("competency '" + competency + "' has no keywords");
        }
        double total = 0.0;
        for (const auto& [word, weight] : weights) {
          if (word.empty()) {
            throw ValidationError("competency '" + competency + "' has an empty keyword");
          }
          if (!(weight > 0.0)) {
            throw ValidationError("keyword '" + word + "' in competency '" + competency +
                                  "' must have positive weight");
          }
          total += weight;
        }
        if (std::abs(total - 1.0) > 1e-6) {
          throw ValidationError("keyword weights for competency '" + competency +
                                "' must sum to 1, got " + std::to_string(total));
        }
      }
      break;
    }
  }
}

uint64_t response_content_hash(const std::string& item_id, const std::string& text) {
  std::string key;
  key.reserve(item_id.size() + 1 + text.size());
  key += item_id;
  key.push_back('\x1F');
  key += text;
  return fnv1a64(key);
}

double reference_score(const KeywordWeights& keywords, const std::string& text) {
  if (keywords.empty()) throw ValidationError("reference scorer called with no keywords");
  const std::set<std::string> present = folded_word_set(text);
  double covered = 0.0;
  for (const auto& [word, weight] : keywords) {
    if (present.count(fold_token(word)) > 0) covered += weight;
  }
  return 1.0 + 4.0 * covered;
}

ReferenceScorer::ReferenceScorer(std::string scorer_id,
                                 std::map<std::string, KeywordWeights> keywords)
    : scorer_id_(std::move(scorer_id)), keywords_(std::move(keywords)) {}

double ReferenceScorer::score(const Item& item, const std::string& text) {
  auto it = keywords_.find(item.competency);
  if (it == keywords_.end()) {
    throw ValidationError("no keywords configured for competency '" + item.competency + "'");
  }
  return reference_score(it->second, text);
}

ReplayScorer::ReplayScorer(std::string scorer_id, const std::string& records_path)
    : scorer_id_(std::move(scorer_id)) {
  std::ifstream in(records_path);
  if (!in) throw ValidationError("cannot open replay records '" + records_path + "'");
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      ScoreRecord rec = score_record_from_json(line);
      by_key_[{rec.item_id, rec.response_hash}] = rec.score;
    } catch (const std::exception& e) {
      throw ValidationError("replay records '" + records_path + "' line " +
                            std::to_string(line_no) + ": " + e.what());
    }
  }
  if (by_key_.empty()) {
    throw ValidationError("replay records '" + records_path + "' contain no scores");
  }
}

double ReplayScorer::score(const Item& item, const std::string& text) {
  const uint64_t hash = response_content_hash(item.item_id, text);
  auto it = by_key_.find({item.item_id, hash});
  if (it == by_key_.end()) {
    throw RuntimeFailure("replay miss for item '" + item.item_id + "', content hash " +
                         hash_hex(hash));
  }
  return it->second;
}

std::unique_ptr<Scorer> make_scorer(const ScorerConfig& config) {
  config.validate();
  switch (config.kind) {
    case ScorerKind::kReference:
      return std::make_unique<ReferenceScorer>(config.scorer_id, config.keywords);
    case ScorerKind::kReplay:
      return std::make_unique<ReplayScorer>(config.scorer_id, config.replay_path);
    case ScorerKind::kRemote:
      return make_remote_scorer(config);
  }
  throw ValidationError("unknown scorer kind");
}

double score_one(Scorer& scorer, const Item& item, const std::string& text) {
  const double s = scorer.score(item, text);
  if (!std::isfinite(s) || s < 1.0 || s > 5.0) {
    throw RuntimeFailure("scorer '" + scorer.scorer_id() + "' returned invalid score " +
                         std::to_string(s) + " for item '" + item.item_id +
                         "'; scores must lie in [1,5]");
  }
  return s;
}

std::vector<ScoreRecord> score_batch(Scorer& scorer,
                                     const std::vector<ScoreRequest>& requests,
                                     ScoreCache& cache, int max_in_flight) {
  if (max_in_flight < 1) throw ValidationError("max_in_flight must be >= 1");
  for (size_t i = 0; i < requests.size(); ++i) {
    if (requests[i].item == nullptr) {
      throw ValidationError("score request " + std::to_string(i) + " has no item");
    }
  }

  const std::string& scorer_id = scorer.scorer_id();
  std::vector<std::optional<ScoreRecord>> results(requests.size());
  std::vector<uint64_t> hashes(requests.size());

  // Cache pass, then coalesce remaining work by content key so each unique
  // (item, text) is scored once no matter how many requests carry it.
  struct Job {
    std::vector<size_t> request_indices;
  };
  std::vector<Job> jobs;
  std::map<std::pair<std::string, uint64_t>, size_t> job_by_key;
  for (size_t i = 0; i < requests.size(); ++i) {
    const ScoreRequest& req = requests[i];
    hashes[i] = response_content_hash(req.item->item_id, req.text);
    if (std::optional<ScoreRecord> hit =
            cache.lookup(scorer_id, req.item->item_id, hashes[i])) {
      hit->variant_id = req.variant_id;
      results[i] = std::move(*hit);
      continue;
    }
    auto key = std::make_pair(req.item->item_id, hashes[i]);
    auto [it, inserted] = job_by_key.try_emplace(key, jobs.size());
    if (inserted) jobs.push_back(Job{});
    jobs[it->second].request_indices.push_back(i);
  }

  std::vector<std::optional<ScoreRecord>> job_results(jobs.size());
  std::atomic<size_t> next_job{0};
  std::atomic<bool> abort{false};
  std::mutex error_mu;
  std::string first_error;
  bool error_is_validation = false;

  auto worker = [&]() {
    while (!abort.load(std::memory_order_relaxed)) {
      const size_t j = next_job.fetch_add(1, std::memory_order_relaxed);
      if (j >= jobs.size()) return;
      const size_t lead = jobs[j].request_indices.front();
      const ScoreRequest& req = requests[lead];
      try {
        ScoreRecord rec;
        rec.scorer_id = scorer_id;
        rec.item_id = req.item->item_id;
        rec.variant_id = req.variant_id;
        rec.response_hash = hashes[lead];
        rec.score = score_one(scorer, *req.item, req.text);
        rec.scored_at = now_iso8601();
        cache.append(rec);
        job_results[j] = std::move(rec);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (first_error.empty()) {
          first_error = e.what();
          error_is_validation = dynamic_cast<const ValidationError*>(&e) != nullptr;
        }
        abort.store(true, std::memory_order_relaxed);
        return;
      }
    }
  };

  const size_t n_workers =
      std::min<size_t>(static_cast<size_t>(max_in_flight), jobs.size());
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(n_workers);
    for (size_t t = 0; t < n_workers; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }

  for (size_t j = 0; j < jobs.size(); ++j) {
    if (!job_results[j]) continue;
    for (size_t i : jobs[j].request_indices) {
      ScoreRecord rec = *job_results[j];
      rec.variant_id = requests[i].variant_id;
      results[i] = std::move(rec);
    }
  }

  if (!first_error.empty()) {
    std::vector<size_t> completed;
    for (size_t i = 0; i < results.size(); ++i) {
      if (results[i]) completed.push_back(i);
    }
    if (error_is_validation) throw ValidationError(first_error);
    throw BatchError(first_error, std::move(completed));
  }

  std::vector<ScoreRecord> out;
  out.reserve(results.size());
  for (auto& r : results) out.push_back(std::move(*r));
  return out;
}

}  // namespace scoreprobe
