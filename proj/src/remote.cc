#include "scoreprobe/remote.h"

#include <chrono>
#include <cmath>
#include <thread>

#include "httplib.h"
#include "json.hpp"

#include "scoreprobe/error.h"

namespace scoreprobe {

namespace {

using nlohmann::json;

// POSTs body to endpoint+path, retrying transport failures with exponential
// backoff. Returns the raw response body for the caller to parse.
std::string post_with_retry(const std::string& endpoint, const std::string& path,
                            const std::string& body, int timeout_ms, int max_retries,
                            int backoff_base_ms, const std::string& what) {
  std::string last_failure;
  for (int attempt = 0; attempt <= max_retries; ++attempt) {
    if (attempt > 0) {
      const int delay_ms = backoff_base_ms * (1 << (attempt - 1));
      std::this_thread::sleep_for(std::chrono::milliseconds(delay_ms));
    }
    httplib::Client client(endpoint);
    if (!client.is_valid()) {
      throw ValidationError(what + ": invalid endpoint '" + endpoint + "'");
    }
    client.set_connection_timeout(std::chrono::milliseconds(timeout_ms));
    client.set_read_timeout(std::chrono::milliseconds(timeout_ms));
    client.set_write_timeout(std::chrono::milliseconds(timeout_ms));

    httplib::Result res = client.Post(path, body, "application/json");
    if (!res) {
      last_failure = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status < 200 || res->status >= 300) {
      last_failure = "HTTP status " + std::to_string(res->status);
      continue;
    }
    return res->body;
  }
  throw RuntimeFailure(what + " failed after " + std::to_string(max_retries + 1) +
                       " attempt(s); last failure: " + last_failure);
}

}  // namespace

RemoteScorer::RemoteScorer(ScorerConfig config, int backoff_base_ms)
    : config_(std::move(config)), backoff_base_ms_(backoff_base_ms) {
  config_.validate();
}

double RemoteScorer::score(const Item& item, const std::string& text) {
  json request{{"item_id", item.item_id},
               {"competency", item.competency},
               {"scenario_text", item.scenario_text},
               {"question_text", item.question_text},
               {"response_text", text}};
  const std::string body = post_with_retry(
      config_.endpoint, "/v1/score", request.dump(), config_.timeout_ms,
      config_.max_retries, backoff_base_ms_,
      "scoring item '" + item.item_id + "' via '" + config_.scorer_id + "'");

  double value = 0.0;
  try {
    json reply = json::parse(body);
    value = reply.at("score").get<double>();
  } catch (const std::exception& e) {
    throw RuntimeFailure("scorer '" + config_.scorer_id + "' returned malformed body: " +
                         e.what());
  }
  if (!std::isfinite(value) || value < 1.0 || value > 5.0) {
    throw RuntimeFailure("scorer '" + config_.scorer_id + "' returned invalid score " +
                         std::to_string(value) + " for item '" + item.item_id +
                         "'; scores must lie in [1,5]");
  }
  return value;
}

std::unique_ptr<Scorer> make_remote_scorer(const ScorerConfig& config) {
  return std::make_unique<RemoteScorer>(config);
}

RemoteRephraser::RemoteRephraser(std::string id, RemoteRephraserConfig config,
                                 int backoff_base_ms)
    : id_(std::move(id)), config_(std::move(config)), backoff_base_ms_(backoff_base_ms) {
  if (id_.empty()) throw ValidationError("rephraser id must be non-empty");
  if (config_.endpoint.empty()) throw ValidationError("remote rephraser requires an endpoint");
  if (config_.timeout_ms <= 0) throw ValidationError("rephraser timeout_ms must be positive");
  if (config_.max_retries < 0) throw ValidationError("rephraser max_retries must be >= 0");
}

std::string RemoteRephraser::rephrase(const std::string& text, const RephraseRglSpec& spec) {
  json request{{"text", text}};
  if (spec.direction.has_value()) {
    request["direction"] = *spec.direction == RglDirection::kLower ? "lower" : "higher";
  } else if (spec.target_rgl.has_value()) {
    request["target_rgl"] = *spec.target_rgl;
  } else {
    throw ValidationError("rephrase spec needs a direction or a target_rgl");
  }
  const std::string body =
      post_with_retry(config_.endpoint, "/v1/rephrase", request.dump(), config_.timeout_ms,
                      config_.max_retries, backoff_base_ms_, "rephrasing via '" + id_ + "'");
  std::string out;
  try {
    json reply = json::parse(body);
    out = reply.at("text").get<std::string>();
  } catch (const std::exception& e) {
    throw RuntimeFailure("rephraser '" + id_ + "' returned malformed body: " + e.what());
  }
  if (out.empty()) throw RuntimeFailure("rephraser '" + id_ + "' returned empty text");
  return out;
}

}  // namespace scoreprobe
