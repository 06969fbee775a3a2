#include "scoreprobe/config.h"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "scoreprobe/error.h"
#include "scoreprobe/prng.h"

namespace scoreprobe {

namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::set<std::string>& allowed,
                const std::string& context) {
  for (const auto& [key, value] : obj.items()) {
    if (allowed.count(key) == 0) {
      throw ValidationError("unknown key '" + key + "' in " + context);
    }
  }
}

uint64_t require_seed(const json& obj, const std::string& context) {
  if (!obj.contains("seed")) {
    throw ValidationError(context + " needs an explicit \"seed\"");
  }
  const json& s = obj.at("seed");
  if (!s.is_number_unsigned()) {
    throw ValidationError(context + ": \"seed\" must be a nonnegative integer");
  }
  return s.get<uint64_t>();
}

std::string resolve_path(const std::string& path, const std::string& base_dir) {
  if (path.empty() || base_dir.empty()) return path;
  std::filesystem::path p(path);
  if (p.is_absolute()) return path;
  return (std::filesystem::path(base_dir) / p).lexically_normal().string();
}

std::map<std::string, KeywordWeights> parse_keywords(const json& obj,
                                                     const std::string& context) {
  if (!obj.is_object()) throw ValidationError(context + " must be an object");
  std::map<std::string, KeywordWeights> out;
  for (const auto& [competency, table] : obj.items()) {
    if (!table.is_object()) {
      throw ValidationError(context + ": competency '" + competency +
                            "' must map keywords to weights");
    }
    KeywordWeights weights;
    for (const auto& [word, weight] : table.items()) {
      if (!weight.is_number()) {
        throw ValidationError(context + ": weight of keyword '" + word +
                              "' must be a number");
      }
      weights[word] = weight.get<double>();
    }
    out[competency] = std::move(weights);
  }
  return out;
}

ScorerConfig parse_scorer(const json& obj, const std::string& base_dir) {
  check_keys(obj,
             {"scorer_id", "kind", "endpoint", "timeout_ms", "max_retries",
              "max_in_flight", "replay_path", "keywords", "keyword_file"},
             "\"scorer\"");
  ScorerConfig config;
  config.scorer_id = obj.value("scorer_id", std::string("scorer"));
  const std::string kind = obj.value("kind", std::string("reference"));
  if (kind == "reference") {
    config.kind = ScorerKind::kReference;
  } else if (kind == "replay") {
    config.kind = ScorerKind::kReplay;
  } else if (kind == "remote") {
    config.kind = ScorerKind::kRemote;
  } else {
    throw ValidationError("unknown scorer kind '" + kind +
                          "' (expected reference, replay, or remote)");
  }
  config.endpoint = obj.value("endpoint", std::string());
  config.timeout_ms = obj.value("timeout_ms", config.timeout_ms);
  config.max_retries = obj.value("max_retries", config.max_retries);
  config.max_in_flight = obj.value("max_in_flight", config.max_in_flight);
  config.replay_path = resolve_path(obj.value("replay_path", std::string()), base_dir);

  if (obj.contains("keywords") && obj.contains("keyword_file")) {
    throw ValidationError("\"scorer\" has both \"keywords\" and \"keyword_file\"");
  }
  if (obj.contains("keywords")) {
    config.keywords = parse_keywords(obj.at("keywords"), "\"scorer\".\"keywords\"");
  } else if (obj.contains("keyword_file")) {
    const std::string path =
        resolve_path(obj.at("keyword_file").get<std::string>(), base_dir);
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open keyword file '" + path + "'");
    json table;
    try {
      in >> table;
    } catch (const std::exception& e) {
      throw ValidationError("keyword file '" + path + "': " + e.what());
    }
    config.keywords = parse_keywords(table, "keyword file '" + path + "'");
  }
  return config;
}

PowerSettings parse_power(const json& obj, const std::string& base_dir) {
  check_keys(obj,
             {"model", "target_width", "level", "method", "trials", "bootstrap_reps",
              "n_ceiling", "seed"},
             "\"power\"");
  if (!obj.contains("model")) throw ValidationError("\"power\" needs a \"model\"");
  const json& model = obj.at("model");
  if (!model.is_object() || !model.contains("type")) {
    throw ValidationError("\"power\".\"model\" needs a \"type\"");
  }

  PowerSettings settings;
  const std::string type = model.at("type").get<std::string>();
  if (type == "parametric") {
    check_keys(model, {"type", "mean_b", "sd_b", "sd_v", "rho", "mean_diff"},
               "\"power\".\"model\"");
    ParametricModel pm;
    pm.mean_b = model.value("mean_b", pm.mean_b);
    pm.sd_b = model.value("sd_b", pm.sd_b);
    pm.sd_v = model.value("sd_v", pm.sd_v);
    pm.rho = model.value("rho", pm.rho);
    pm.mean_diff = model.value("mean_diff", pm.mean_diff);
    pm.validate();
    settings.model = pm;
  } else if (type == "pilot") {
    check_keys(model, {"type", "pairs_file"}, "\"power\".\"model\"");
    if (!model.contains("pairs_file")) {
      throw ValidationError("pilot power model needs a \"pairs_file\"");
    }
    settings.model = load_pilot_pairs(
        resolve_path(model.at("pairs_file").get<std::string>(), base_dir));
  } else {
    throw ValidationError("power model type must be \"parametric\" or \"pilot\"");
  }

  PowerOptions& options = settings.options;
  options.target_width = obj.value("target_width", options.target_width);
  options.level = obj.value("level", options.level);
  options.method = effect_method_from_string(obj.value("method", std::string("d_av")));
  options.trials = obj.value("trials", options.trials);
  options.bootstrap_reps = obj.value("bootstrap_reps", options.bootstrap_reps);
  options.n_ceiling = obj.value("n_ceiling", options.n_ceiling);
  options.seed = require_seed(obj, "\"power\"");
  return settings;
}

ExperimentKind parse_kind(const std::string& kind) {
  if (kind == "duplicate") return ExperimentKind::kDuplicate;
  if (kind == "append_competency") return ExperimentKind::kAppendCompetency;
  if (kind == "append_scenario") return ExperimentKind::kAppendScenario;
  if (kind == "append_formulaic") return ExperimentKind::kAppendFormulaic;
  if (kind == "spelling_noise") return ExperimentKind::kSpellingNoise;
  if (kind == "rephrase_rgl") return ExperimentKind::kRephraseRgl;
  if (kind == "cross_item") return ExperimentKind::kCrossItem;
  throw ValidationError("unknown experiment kind '" + kind + "'");
}

ExperimentEntry parse_experiment(const json& obj, size_t index) {
  const std::string context = "experiments[" + std::to_string(index) + "]";
  if (!obj.is_object()) throw ValidationError(context + " must be an object");
  if (!obj.contains("kind")) throw ValidationError(context + " needs a \"kind\"");

  ExperimentEntry entry;
  entry.kind = parse_kind(obj.at("kind").get<std::string>());
  entry.name = obj.value("name", to_string(entry.kind));

  std::set<std::string> allowed = {"kind", "name"};
  switch (entry.kind) {
    case ExperimentKind::kDuplicate:
      break;
    case ExperimentKind::kAppendCompetency:
      allowed.insert("template");
      entry.competency_template = obj.value("template", entry.competency_template);
      break;
    case ExperimentKind::kAppendScenario:
      break;
    case ExperimentKind::kAppendFormulaic:
      allowed.insert("sentence");
      entry.sentence = obj.value("sentence", entry.sentence);
      break;
    case ExperimentKind::kSpellingNoise: {
      allowed.insert({"cer", "dist", "coupled", "seed"});
      entry.seed = require_seed(obj, context);
      entry.coupled = obj.value("coupled", false);
      if (obj.contains("cer")) {
        const json& cer = obj.at("cer");
        if (!cer.is_array() || cer.empty()) {
          throw ValidationError(context + ": \"cer\" must be a nonempty array");
        }
        for (const json& level : cer) {
          if (!level.is_number()) {
            throw ValidationError(context + ": \"cer\" entries must be numbers");
          }
          entry.cer_levels.push_back(level.get<double>());
        }
      } else {
        entry.cer_levels = default_cer_sweep();
      }
      for (double level : entry.cer_levels) {
        if (level <= 0.0 || level >= 1.0) {
          throw ValidationError(context + ": cer levels must lie in (0,1)");
        }
      }
      if (obj.contains("dist")) {
        const json& dist = obj.at("dist");
        check_keys(dist, {"sub", "del", "ins"}, context + ".\"dist\"");
        entry.dist.p_sub = dist.value("sub", entry.dist.p_sub);
        entry.dist.p_del = dist.value("del", entry.dist.p_del);
        entry.dist.p_ins = dist.value("ins", entry.dist.p_ins);
      }
      entry.dist.validate();
      break;
    }
    case ExperimentKind::kRephraseRgl: {
      allowed.insert({"direction", "target_rgl", "rephraser"});
      const bool has_direction = obj.contains("direction");
      const bool has_target = obj.contains("target_rgl");
      if (has_direction == has_target) {
        throw ValidationError(context +
                              " needs exactly one of \"direction\" or \"target_rgl\"");
      }
      if (has_direction) {
        const std::string direction = obj.at("direction").get<std::string>();
        if (direction == "lower") {
          entry.rephrase.direction = RglDirection::kLower;
        } else if (direction == "higher") {
          entry.rephrase.direction = RglDirection::kHigher;
        } else {
          throw ValidationError(context + ": direction must be \"lower\" or \"higher\"");
        }
      } else {
        entry.rephrase.target_rgl = obj.at("target_rgl").get<double>();
      }
      entry.rephrase.rephraser_id = obj.value("rephraser", entry.rephrase.rephraser_id);
      break;
    }
    case ExperimentKind::kCrossItem: {
      allowed.insert({"mode", "seed"});
      entry.seed = require_seed(obj, context);
      const std::string mode = obj.value("mode", std::string("different_competency"));
      if (mode == "same_competency") {
        entry.mode = PermutationMode::kSameCompetency;
      } else if (mode == "different_competency") {
        entry.mode = PermutationMode::kDifferentCompetency;
      } else {
        throw ValidationError(context +
                              ": mode must be same_competency or different_competency");
      }
      break;
    }
  }
  check_keys(obj, allowed, context + " (kind " + to_string(entry.kind) + ")");
  return entry;
}

}  // namespace

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kDuplicate: return "duplicate";
    case ExperimentKind::kAppendCompetency: return "append_competency";
    case ExperimentKind::kAppendScenario: return "append_scenario";
    case ExperimentKind::kAppendFormulaic: return "append_formulaic";
    case ExperimentKind::kSpellingNoise: return "spelling_noise";
    case ExperimentKind::kRephraseRgl: return "rephrase_rgl";
    case ExperimentKind::kCrossItem: return "cross_item";
  }
  return "unknown";
}

std::vector<double> default_cer_sweep() {
  std::vector<double> levels;
  for (int i = 1; i <= 10; ++i) levels.push_back(static_cast<double>(i) / 20.0);
  return levels;
}

void ExperimentConfig::validate() const {
  if (corpus_path.empty()) throw ValidationError("config needs a \"corpus\" path");
  if (output_dir.empty()) throw ValidationError("config needs an \"output_dir\"");
  scorer.validate();
  if (!sample.use_all && sample.cap < 1) {
    throw ValidationError("sample cap must be >= 1");
  }
  if (experiments.empty()) {
    throw ValidationError("config needs at least one experiment");
  }
  std::set<std::string> names;
  for (const ExperimentEntry& entry : experiments) {
    if (entry.name.empty()) throw ValidationError("experiment name must be non-empty");
    for (char c : entry.name) {
      const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                      (c >= '0' && c <= '9') || c == '_' || c == '-';
      if (!ok) {
        throw ValidationError("experiment name '" + entry.name +
                              "' may only use letters, digits, '_' and '-'");
      }
    }
    if (!names.insert(entry.name).second) {
      throw ValidationError("duplicate experiment name '" + entry.name + "'");
    }
  }
  if (stats.bootstrap_reps < 1) throw ValidationError("bootstrap_reps must be >= 1");
}

ExperimentConfig parse_experiment_config(const std::string& json_text,
                                         const std::string& base_dir) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const std::exception& e) {
    throw ValidationError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ValidationError("config must be a JSON object");
  check_keys(root,
             {"corpus", "scorer", "cache", "sample", "experiments", "stats",
              "output_dir", "rephraser", "power"},
             "config");

  ExperimentConfig config;
  config.config_hash = fnv1a64(json_text);

  if (!root.contains("corpus")) throw ValidationError("config needs a \"corpus\" path");
  config.corpus_path = resolve_path(root.at("corpus").get<std::string>(), base_dir);

  if (!root.contains("scorer")) throw ValidationError("config needs a \"scorer\"");
  config.scorer = parse_scorer(root.at("scorer"), base_dir);

  config.cache_path = resolve_path(root.value("cache", std::string()), base_dir);

  if (!root.contains("sample")) {
    throw ValidationError("config needs \"sample\" ({cap, seed} or \"use-all\")");
  }
  const json& sample = root.at("sample");
  if (sample.is_string()) {
    if (sample.get<std::string>() != "use-all") {
      throw ValidationError("\"sample\" must be \"use-all\" or an object");
    }
    config.sample.use_all = true;
  } else if (sample.is_object()) {
    check_keys(sample, {"cap", "seed"}, "\"sample\"");
    config.sample.cap = sample.value("cap", config.sample.cap);
    config.sample.seed = require_seed(sample, "\"sample\"");
  } else {
    throw ValidationError("\"sample\" must be \"use-all\" or an object");
  }

  if (!root.contains("experiments") || !root.at("experiments").is_array()) {
    throw ValidationError("config needs an \"experiments\" array");
  }
  size_t index = 0;
  for (const json& entry : root.at("experiments")) {
    config.experiments.push_back(parse_experiment(entry, index++));
  }

  if (!root.contains("stats")) throw ValidationError("config needs a \"stats\" object");
  const json& stats = root.at("stats");
  check_keys(stats, {"method", "bootstrap_reps", "seed"}, "\"stats\"");
  config.stats.method =
      effect_method_from_string(stats.value("method", std::string("d_av")));
  config.stats.bootstrap_reps = stats.value("bootstrap_reps", config.stats.bootstrap_reps);
  config.stats.seed = require_seed(stats, "\"stats\"");

  if (!root.contains("output_dir")) throw ValidationError("config needs an \"output_dir\"");
  config.output_dir = resolve_path(root.at("output_dir").get<std::string>(), base_dir);

  if (root.contains("rephraser")) {
    const json& reph = root.at("rephraser");
    check_keys(reph, {"id", "endpoint", "timeout_ms", "max_retries"}, "\"rephraser\"");
    RephraserSettings settings;
    settings.id = reph.value("id", std::string("remote"));
    if (!reph.contains("endpoint")) {
      throw ValidationError("\"rephraser\" needs an \"endpoint\"");
    }
    settings.endpoint = reph.at("endpoint").get<std::string>();
    settings.timeout_ms = reph.value("timeout_ms", settings.timeout_ms);
    settings.max_retries = reph.value("max_retries", settings.max_retries);
    config.remote_rephraser = std::move(settings);
  }

  if (root.contains("power")) {
    config.power = parse_power(root.at("power"), base_dir);
  }

  config.validate();
  return config;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::string base_dir = std::filesystem::path(path).parent_path().string();
  return parse_experiment_config(buffer.str(), base_dir);
}

void apply_seed_override(ExperimentConfig& config, uint64_t master_seed) {
  config.sample.seed = derive_seed(master_seed, "sample");
  config.stats.seed = derive_seed(master_seed, "stats");
  for (ExperimentEntry& entry : config.experiments) {
    entry.seed = derive_seed(master_seed, "experiment-" + entry.name);
  }
  if (config.power.has_value()) {
    config.power->options.seed = derive_seed(master_seed, "power");
  }
}

}  // namespace scoreprobe
