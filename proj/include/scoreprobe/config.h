#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "scoreprobe/perturb.h"
#include "scoreprobe/power.h"
#include "scoreprobe/scoring.h"
#include "scoreprobe/stats.h"

namespace scoreprobe {

enum class ExperimentKind {
  kDuplicate,
  kAppendCompetency,
  kAppendScenario,
  kAppendFormulaic,
  kSpellingNoise,
  kRephraseRgl,
  kCrossItem,
};

std::string to_string(ExperimentKind kind);

// One entry under "experiments" in the config file. Which fields matter
// depends on kind; parsing rejects fields that do not belong to the kind.
struct ExperimentEntry {
  std::string name;  // unique; used in output filenames
  ExperimentKind kind = ExperimentKind::kDuplicate;

  std::string competency_template = kDefaultCompetencyTemplate;
  std::string sentence = kDefaultFormulaicSentence;

  std::vector<double> cer_levels;  // spelling noise; default 0.05..0.50 step 0.05
  EditDistribution dist;
  bool coupled = false;

  RephraseRglSpec rephrase;

  PermutationMode mode = PermutationMode::kDifferentCompetency;

  uint64_t seed = 0;  // spelling noise and cross-item entries
};

struct SampleSettings {
  bool use_all = false;
  int cap = 2;
  uint64_t seed = 0;
};

struct StatsSettings {
  EffectMethod method = EffectMethod::kDAv;
  int bootstrap_reps = 10000;
  uint64_t seed = 0;
};

// Optional remote rephrasing service registered alongside the built-ins.
struct RephraserSettings {
  std::string id;
  std::string endpoint;
  int timeout_ms = 10000;
  int max_retries = 3;
};

// Optional sample-size planning section; drives the power subcommand.
struct PowerSettings {
  PowerModel model;
  PowerOptions options;
};

struct ExperimentConfig {
  std::string corpus_path;
  ScorerConfig scorer;
  std::string cache_path;  // empty = in-memory only
  SampleSettings sample;
  std::vector<ExperimentEntry> experiments;
  StatsSettings stats;
  std::string output_dir;
  std::optional<RephraserSettings> remote_rephraser;
  std::optional<PowerSettings> power;
  uint64_t config_hash = 0;  // of the raw config bytes

  void validate() const;
};

// Parses the JSON text. Unknown keys are errors (a typo like "sed" for
// "seed" must not silently change results). Relative paths are resolved
// against base_dir. Every random stage must carry an explicit seed.
ExperimentConfig parse_experiment_config(const std::string& json_text,
                                         const std::string& base_dir);

ExperimentConfig load_experiment_config(const std::string& path);

// Rederives every seed in the config from one master seed so a single flag
// can rerun the full pipeline on fresh randomness.
void apply_seed_override(ExperimentConfig& config, uint64_t master_seed);

// The default CER sweep: 0.05, 0.10, ..., 0.50.
std::vector<double> default_cer_sweep();

}  // namespace scoreprobe
