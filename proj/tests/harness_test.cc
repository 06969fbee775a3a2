#include "scoreprobe/harness.h"

#include <gtest/gtest.h>

#include <filesystem>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "scoreprobe/config.h"
#include "scoreprobe/error.h"
#include "scoreprobe/prng.h"
#include "test_support.h"

namespace scoreprobe {
namespace {

using nlohmann::json;
using test_support::TempDir;
using test_support::read_file;
using test_support::synthetic_corpus_jsonl;
using test_support::synthetic_keywords;
using test_support::write_file;

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

json keywords_json() {
  json out = json::object();
  for (const auto& [competency, weights] : synthetic_keywords()) {
    json table = json::object();
    for (const auto& [word, weight] : weights) table[word] = weight;
    out[competency] = table;
  }
  return out;
}

json minimal_config(const std::string& corpus_path, const std::string& out_dir) {
  return json{{"corpus", corpus_path},
              {"scorer",
               {{"scorer_id", "kw"}, {"kind", "reference"}, {"keywords", keywords_json()}}},
              {"sample", "use-all"},
              {"stats", {{"bootstrap_reps", 300}, {"seed", 9}}},
              {"output_dir", out_dir},
              {"experiments", json::array({json{{"kind", "duplicate"}, {"name", "dup"}}})}};
}

ExperimentConfig parse(const json& config) {
  return parse_experiment_config(config.dump(), "");
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

class ConfigParseTest : public ::testing::Test {
 protected:
  ConfigParseTest() : base_(minimal_config("/data/corpus.jsonl", "/data/out")) {}

  json base_;
};

TEST_F(ConfigParseTest, ParsesTheMinimalConfig) {
  const ExperimentConfig config = parse(base_);
  EXPECT_EQ(config.corpus_path, "/data/corpus.jsonl");
  EXPECT_EQ(config.output_dir, "/data/out");
  EXPECT_EQ(config.scorer.scorer_id, "kw");
  EXPECT_EQ(config.scorer.kind, ScorerKind::kReference);
  EXPECT_TRUE(config.sample.use_all);
  EXPECT_TRUE(config.cache_path.empty());
  EXPECT_EQ(config.stats.method, EffectMethod::kDAv);
  EXPECT_EQ(config.stats.bootstrap_reps, 300);
  EXPECT_EQ(config.stats.seed, 9u);
  ASSERT_EQ(config.experiments.size(), 1u);
  EXPECT_EQ(config.experiments[0].name, "dup");
  EXPECT_EQ(config.experiments[0].kind, ExperimentKind::kDuplicate);
  EXPECT_EQ(config.config_hash, fnv1a64(base_.dump()));
  EXPECT_FALSE(config.remote_rephraser.has_value());
  EXPECT_FALSE(config.power.has_value());
}

TEST_F(ConfigParseTest, ResolvesRelativePathsAgainstTheConfigDirectory) {
  base_["corpus"] = "data/corpus.jsonl";
  base_["output_dir"] = "out";
  base_["cache"] = "cache/scores.jsonl";
  const ExperimentConfig config = parse_experiment_config(base_.dump(), "/base");
  EXPECT_EQ(config.corpus_path, "/base/data/corpus.jsonl");
  EXPECT_EQ(config.output_dir, "/base/out");
  EXPECT_EQ(config.cache_path, "/base/cache/scores.jsonl");

  base_["corpus"] = "/abs/corpus.jsonl";
  EXPECT_EQ(parse_experiment_config(base_.dump(), "/base").corpus_path, "/abs/corpus.jsonl");
}

TEST_F(ConfigParseTest, RejectsUnknownKeysEverywhere) {
  json bad = base_;
  bad["outputdir"] = "typo";
  try {
    parse(bad);
    FAIL() << "unknown top-level key accepted";
  } catch (const ValidationError& e) {
    EXPECT_TRUE(contains(e.what(), "unknown key 'outputdir' in config")) << e.what();
  }

  bad = base_;
  bad["scorer"]["endpoit"] = "http://x";
  EXPECT_THROW(parse(bad), ValidationError);

  bad = base_;
  bad["sample"] = json{{"cap", 2}, {"seed", 1}, {"extra", true}};
  EXPECT_THROW(parse(bad), ValidationError);

  bad = base_;
  bad["stats"]["sed"] = 1;
  EXPECT_THROW(parse(bad), ValidationError);

  bad = base_;
  bad["experiments"][0]["sentence"] = "does not belong to duplicate";
  try {
    parse(bad);
    FAIL() << "kind-foreign key accepted";
  } catch (const ValidationError& e) {
    EXPECT_TRUE(contains(e.what(), "unknown key 'sentence'")) << e.what();
    EXPECT_TRUE(contains(e.what(), "kind duplicate")) << e.what();
  }
}

TEST_F(ConfigParseTest, RequiresExplicitSeedsForRandomStages) {
  json bad = base_;
  bad["sample"] = json{{"cap", 2}};
  try {
    parse(bad);
    FAIL() << "sample without seed accepted";
  } catch (const ValidationError& e) {
    EXPECT_TRUE(contains(e.what(), "\"sample\" needs an explicit \"seed\"")) << e.what();
  }

  bad = base_;
  bad["stats"].erase("seed");
  EXPECT_THROW(parse(bad), ValidationError);

  bad = base_;
  bad["stats"]["seed"] = -4;
  try {
    parse(bad);
    FAIL() << "negative seed accepted";
  } catch (const ValidationError& e) {
    EXPECT_TRUE(contains(e.what(), "nonnegative integer")) << e.what();
  }

  bad = base_;
  bad["experiments"].push_back(json{{"kind", "spelling_noise"}, {"name", "n"}});
  EXPECT_THROW(parse(bad), ValidationError);

  bad = base_;
  bad["experiments"].push_back(json{{"kind", "cross_item"}, {"name", "x"}});
  EXPECT_THROW(parse(bad), ValidationError);
}

TEST_F(ConfigParseTest, ValidatesSampleForms) {
  json config = base_;
  config["sample"] = json{{"cap", 3}, {"seed", 17}};
  const ExperimentConfig parsed = parse(config);
  EXPECT_FALSE(parsed.sample.use_all);
  EXPECT_EQ(parsed.sample.cap, 3);
  EXPECT_EQ(parsed.sample.seed, 17u);

  config["sample"] = "use-most";
  EXPECT_THROW(parse(config), ValidationError);
  config["sample"] = 7;
  EXPECT_THROW(parse(config), ValidationError);
  config["sample"] = json{{"cap", 0}, {"seed", 17}};
  EXPECT_THROW(parse(config), ValidationError);
}

TEST_F(ConfigParseTest, ValidatesExperimentEntries) {
  json config = base_;
  config["experiments"] = json::array();
  EXPECT_THROW(parse(config), ValidationError);

  config = base_;
  config["experiments"].push_back(json{{"name", "kindless"}});
  EXPECT_THROW(parse(config), ValidationError);

  config = base_;
  config["experiments"].push_back(json{{"kind", "word_salad"}});
  try {
    parse(config);
    FAIL() << "unknown kind accepted";
  } catch (const ValidationError& e) {
    EXPECT_TRUE(contains(e.what(), "unknown experiment kind 'word_salad'")) << e.what();
  }

  config = base_;
  config["experiments"].push_back(json{{"kind", "duplicate"}, {"name", "dup"}});
  try {
    parse(config);
    FAIL() << "duplicate name accepted";
  } catch (const ValidationError& e) {
    EXPECT_TRUE(contains(e.what(), "duplicate experiment name 'dup'")) << e.what();
  }

  config = base_;
  config["experiments"][0]["name"] = "bad name!";
  EXPECT_THROW(parse(config), ValidationError);

  // The name defaults to the kind.
  config = base_;
  config["experiments"] = json::array({json{{"kind", "append_scenario"}}});
  EXPECT_EQ(parse(config).experiments[0].name, "append_scenario");
}

TEST_F(ConfigParseTest, ParsesSpellingNoiseEntries) {
  json config = base_;
  config["experiments"] = json::array({json{{"kind", "spelling_noise"},
                                            {"name", "noise"},
                                            {"cer", {0.1, 0.3}},
                                            {"dist", {{"sub", 0.5}, {"del", 0.25}, {"ins", 0.25}}},
                                            {"coupled", true},
                                            {"seed", 21}}});
  const ExperimentEntry entry = parse(config).experiments[0];
  EXPECT_EQ(entry.cer_levels, (std::vector<double>{0.1, 0.3}));
  EXPECT_DOUBLE_EQ(entry.dist.p_sub, 0.5);
  EXPECT_TRUE(entry.coupled);
  EXPECT_EQ(entry.seed, 21u);

  // Omitting "cer" selects the standard sweep.
  config["experiments"][0].erase("cer");
  EXPECT_EQ(parse(config).experiments[0].cer_levels, default_cer_sweep());
  ASSERT_EQ(default_cer_sweep().size(), 10u);
  EXPECT_DOUBLE_EQ(default_cer_sweep().front(), 0.05);
  EXPECT_DOUBLE_EQ(default_cer_sweep().back(), 0.50);

  config["experiments"][0]["cer"] = json::array();
  EXPECT_THROW(parse(config), ValidationError);
  config["experiments"][0]["cer"] = {0.0};
  EXPECT_THROW(parse(config), ValidationError);
  config["experiments"][0]["cer"] = {1.0};
  EXPECT_THROW(parse(config), ValidationError);

  config["experiments"][0]["cer"] = {0.2};
  config["experiments"][0]["dist"] = json{{"sub", 0.9}, {"del", 0.3}, {"ins", 0.3}};
  EXPECT_THROW(parse(config), ValidationError);
}

TEST_F(ConfigParseTest, ParsesRephraseEntries) {
  json config = base_;
  config["experiments"] = json::array(
      {json{{"kind", "rephrase_rgl"}, {"name", "r"}, {"direction", "lower"}}});
  ExperimentEntry entry = parse(config).experiments[0];
  EXPECT_EQ(entry.rephrase.direction, RglDirection::kLower);
  EXPECT_EQ(entry.rephrase.rephraser_id, "rulebased");

  config["experiments"][0] =
      json{{"kind", "rephrase_rgl"}, {"name", "r"}, {"target_rgl", 8.0}, {"rephraser", "identity"}};
  entry = parse(config).experiments[0];
  EXPECT_FALSE(entry.rephrase.direction.has_value());
  EXPECT_DOUBLE_EQ(*entry.rephrase.target_rgl, 8.0);
  EXPECT_EQ(entry.rephrase.rephraser_id, "identity");

  config["experiments"][0] = json{{"kind", "rephrase_rgl"}, {"name", "r"}};
  try {
    parse(config);
    FAIL() << "direction-free rephrase accepted";
  } catch (const ValidationError& e) {
    EXPECT_TRUE(contains(e.what(), "exactly one of \"direction\" or \"target_rgl\""))
        << e.what();
  }

  config["experiments"][0] = json{
      {"kind", "rephrase_rgl"}, {"name", "r"}, {"direction", "lower"}, {"target_rgl", 8.0}};
  EXPECT_THROW(parse(config), ValidationError);

  config["experiments"][0] =
      json{{"kind", "rephrase_rgl"}, {"name", "r"}, {"direction", "sideways"}};
  EXPECT_THROW(parse(config), ValidationError);
}

TEST_F(ConfigParseTest, ParsesCrossItemEntries) {
  json config = base_;
  config["experiments"] = json::array(
      {json{{"kind", "cross_item"}, {"name", "x"}, {"mode", "same_competency"}, {"seed", 3}}});
  EXPECT_EQ(parse(config).experiments[0].mode, PermutationMode::kSameCompetency);

  config["experiments"][0]["mode"] = "different_competency";
  EXPECT_EQ(parse(config).experiments[0].mode, PermutationMode::kDifferentCompetency);

  config["experiments"][0]["mode"] = "shuffled";
  EXPECT_THROW(parse(config), ValidationError);
}

TEST_F(ConfigParseTest, LoadsKeywordsFromAFileButNotBoth) {
  TempDir dir;
  const std::string keyword_path = dir.file("keywords.json");
  write_file(keyword_path, keywords_json().dump());

  json config = base_;
  config["scorer"].erase("keywords");
  config["scorer"]["keyword_file"] = keyword_path;
  EXPECT_EQ(parse(config).scorer.keywords, synthetic_keywords());

  config["scorer"]["keywords"] = keywords_json();
  try {
    parse(config);
    FAIL() << "both keyword sources accepted";
  } catch (const ValidationError& e) {
    EXPECT_TRUE(contains(e.what(), "both \"keywords\" and \"keyword_file\"")) << e.what();
  }

  config["scorer"].erase("keywords");
  config["scorer"]["keyword_file"] = dir.file("missing.json");
  EXPECT_THROW(parse(config), ValidationError);
}

TEST_F(ConfigParseTest, ParsesOptionalRephraserAndPowerSections) {
  json config = base_;
  config["rephraser"] = json{{"endpoint", "http://127.0.0.1:9"}};
  config["power"] = json{{"model",
                          {{"type", "parametric"},
                           {"sd_b", 1.17},
                           {"sd_v", 1.15},
                           {"rho", 0.45}}},
                         {"target_width", 0.2},
                         {"trials", 6},
                         {"bootstrap_reps", 200},
                         {"seed", 5}};
  const ExperimentConfig parsed = parse(config);
  ASSERT_TRUE(parsed.remote_rephraser.has_value());
  EXPECT_EQ(parsed.remote_rephraser->id, "remote");
  EXPECT_EQ(parsed.remote_rephraser->endpoint, "http://127.0.0.1:9");
  ASSERT_TRUE(parsed.power.has_value());
  const auto* model = std::get_if<ParametricModel>(&parsed.power->model);
  ASSERT_NE(model, nullptr);
  EXPECT_DOUBLE_EQ(model->sd_b, 1.17);
  EXPECT_DOUBLE_EQ(parsed.power->options.target_width, 0.2);
  EXPECT_EQ(parsed.power->options.seed, 5u);

  config["rephraser"] = json{{"id", "svc"}};
  EXPECT_THROW(parse(config), ValidationError);  // endpoint required

  config["rephraser"] = json{{"endpoint", "http://127.0.0.1:9"}};
  config["power"]["model"]["type"] = "magic";
  EXPECT_THROW(parse(config), ValidationError);

  config["power"]["model"] = json{{"type", "pilot"}};
  EXPECT_THROW(parse(config), ValidationError);  // pairs_file required

  config["power"] = json{{"model", {{"type", "parametric"}}}, {"trials", 6}};
  EXPECT_THROW(parse(config), ValidationError);  // seed required
}

TEST_F(ConfigParseTest, SeedOverrideRederivesEveryStageSeed) {
  json config_json = base_;
  config_json["sample"] = json{{"cap", 2}, {"seed", 1}};
  config_json["experiments"].push_back(
      json{{"kind", "spelling_noise"}, {"name", "noise"}, {"cer", {0.2}}, {"seed", 2}});
  config_json["power"] = json{{"model", {{"type", "parametric"}}}, {"seed", 3}};
  ExperimentConfig config = parse(config_json);

  apply_seed_override(config, 77);
  EXPECT_EQ(config.sample.seed, derive_seed(77, "sample"));
  EXPECT_EQ(config.stats.seed, derive_seed(77, "stats"));
  EXPECT_EQ(config.experiments[0].seed, derive_seed(77, "experiment-dup"));
  EXPECT_EQ(config.experiments[1].seed, derive_seed(77, "experiment-noise"));
  EXPECT_EQ(config.power->options.seed, derive_seed(77, "power"));
}

TEST_F(ConfigParseTest, RejectsMalformedJson) {
  EXPECT_THROW(parse_experiment_config("not json", ""), ValidationError);
  EXPECT_THROW(parse_experiment_config("[1, 2]", ""), ValidationError);
}

class HarnessRunTest : public ::testing::Test {
 protected:
  HarnessRunTest() {
    corpus_path_ = dir_.file("corpus.jsonl");
    write_file(corpus_path_, synthetic_corpus_jsonl(24));
  }

  json full_config(const std::string& out_dir) const {
    json config = minimal_config(corpus_path_, out_dir);
    config["stats"] = json{{"bootstrap_reps", 300}, {"seed", 9}};
    config["experiments"] = json::array(
        {json{{"kind", "duplicate"}, {"name", "dup"}},
         json{{"kind", "spelling_noise"}, {"name", "noise"}, {"cer", {0.2, 0.4}}, {"seed", 11}},
         json{{"kind", "rephrase_rgl"}, {"name", "easier"}, {"direction", "lower"}},
         json{{"kind", "cross_item"}, {"name", "swap"}, {"mode", "same_competency"}, {"seed", 13}}});
    return config;
  }

  TempDir dir_;
  std::string corpus_path_;
};

TEST_F(HarnessRunTest, RunsTheFullPipelineAndWritesEveryArtifact) {
  const std::string out = dir_.file("out");
  const HarnessReport report = run_experiment(parse(full_config(out)));

  EXPECT_TRUE(report.complete);
  EXPECT_EQ(report.n_sampled, 24u);
  EXPECT_GT(report.scorer_calls, 0u);
  ASSERT_EQ(report.experiments.size(), 4u);

  const ExperimentOutcome& dup = report.experiments[0];
  ASSERT_EQ(dup.rows.size(), 2u);
  EXPECT_EQ(dup.rows[0].variant, "baseline");
  EXPECT_FALSE(dup.rows[0].d.has_value());
  EXPECT_EQ(dup.rows[1].variant, "duplicate");
  ASSERT_TRUE(dup.rows[1].d.has_value());
  EXPECT_DOUBLE_EQ(*dup.rows[1].d, 0.0);
  ASSERT_TRUE(dup.rows[1].ci.has_value());
  EXPECT_DOUBLE_EQ(dup.rows[1].ci->lo, 0.0);
  EXPECT_DOUBLE_EQ(dup.rows[1].ci->hi, 0.0);
  EXPECT_GT(*dup.rows[1].mean_word_count, *dup.rows[0].mean_word_count);

  const ExperimentOutcome& noise = report.experiments[1];
  ASSERT_EQ(noise.rows.size(), 3u);
  EXPECT_EQ(noise.rows[1].variant, "cer=0.20");
  EXPECT_EQ(noise.rows[2].variant, "cer=0.40");
  EXPECT_LT(noise.rows[2].mean_score, noise.rows[0].mean_score);

  // Same-competency reassignment keeps the keyword table, so scores hold.
  const ExperimentOutcome& swap = report.experiments[3];
  ASSERT_EQ(swap.rows.size(), 2u);
  EXPECT_EQ(swap.rows[1].variant, "cross_item_same_competency");
  EXPECT_DOUBLE_EQ(*swap.rows[1].d, 0.0);

  const std::set<std::string> expected = {
      "sample.csv",          "manifest.json",       "table_dup.csv",
      "table_dup.md",        "table_noise.csv",     "table_noise.md",
      "figure_noise.csv",    "table_easier.csv",    "table_easier.md",
      "readability_easier.csv", "table_swap.csv",   "table_swap.md"};
  std::set<std::string> actual;
  for (const auto& entry : std::filesystem::directory_iterator(out)) {
    actual.insert(entry.path().filename().string());
  }
  EXPECT_EQ(actual, expected);

  const std::vector<std::string> sample_lines = lines_of(read_file(out + "/sample.csv"));
  ASSERT_EQ(sample_lines.size(), 25u);
  EXPECT_EQ(sample_lines[0], "response_id,item_id,baseline_score,bin,bin_label");

  const std::vector<std::string> table_lines = lines_of(read_file(out + "/table_dup.csv"));
  ASSERT_EQ(table_lines.size(), 3u);
  EXPECT_EQ(table_lines[0], "variant,mean_word_count,mean_score,sd,d,ci_low,ci_high,floor_rate");
  EXPECT_EQ(table_lines[1].rfind("baseline,", 0), 0u);

  EXPECT_EQ(lines_of(read_file(out + "/table_dup.md"))[0], "## dup");

  const std::vector<std::string> figure_lines = lines_of(read_file(out + "/figure_noise.csv"));
  ASSERT_EQ(figure_lines.size(), 4u);
  EXPECT_EQ(figure_lines[0], "cer,mean_score,ci_low,ci_high");
  EXPECT_EQ(figure_lines[1].rfind("0.00,", 0), 0u);

  const std::vector<std::string> readability_lines =
      lines_of(read_file(out + "/readability_easier.csv"));
  ASSERT_EQ(readability_lines.size(), 3u);
  EXPECT_EQ(readability_lines[0], "variant,mean_rgl,mean_words,mean_sentences,mean_wps,mean_spw");
  EXPECT_EQ(readability_lines[1].rfind("baseline,", 0), 0u);
}

TEST_F(HarnessRunTest, WritesAManifestDescribingTheRun) {
  const std::string out = dir_.file("out");
  const json config_json = full_config(out);
  run_experiment(parse(config_json));

  const json manifest = json::parse(read_file(out + "/manifest.json"));
  const std::set<std::string> expected_keys = {
      "complete",  "config_hash", "corpus_hash", "scorer_id",   "method",
      "bootstrap_reps", "n_sampled", "sample_mode", "seeds",    "experiments"};
  std::set<std::string> actual_keys;
  for (const auto& [key, value] : manifest.items()) actual_keys.insert(key);
  EXPECT_EQ(actual_keys, expected_keys);

  EXPECT_TRUE(manifest.at("complete").get<bool>());
  EXPECT_EQ(manifest.at("scorer_id"), "kw");
  EXPECT_EQ(manifest.at("method"), "d_av");
  EXPECT_EQ(manifest.at("bootstrap_reps"), 300);
  EXPECT_EQ(manifest.at("n_sampled"), 24);
  EXPECT_EQ(manifest.at("sample_mode"), "use-all");
  EXPECT_EQ(manifest.at("config_hash").get<std::string>().size(), 16u);

  const json& seeds = manifest.at("seeds");
  EXPECT_EQ(seeds.at("stats"), 9);
  EXPECT_FALSE(seeds.contains("sample"));  // use-all has no sampling seed
  EXPECT_EQ(seeds.at("experiments"), (json{{"noise", 11}, {"swap", 13}}));

  const json& experiments = manifest.at("experiments");
  ASSERT_EQ(experiments.size(), 4u);
  EXPECT_EQ(experiments[0].at("name"), "dup");
  EXPECT_EQ(experiments[0].at("kind"), "duplicate");
  EXPECT_EQ(experiments[0].at("status"), "ok");
  EXPECT_EQ(experiments[0].at("rows"), 2);
  EXPECT_EQ(experiments[0].at("files"),
            (json::array({"table_dup.csv", "table_dup.md"})));
  EXPECT_EQ(experiments[1].at("files"),
            (json::array({"table_noise.csv", "table_noise.md", "figure_noise.csv"})));
}

TEST_F(HarnessRunTest, IdenticalConfigsProduceByteIdenticalOutputs) {
  const std::string out1 = dir_.file("run1");
  const std::string out2 = dir_.file("run2");
  json config_json = full_config("placeholder");

  ExperimentConfig first = parse(config_json);
  first.output_dir = out1;
  run_experiment(first);

  ExperimentConfig second = parse(config_json);
  second.output_dir = out2;
  run_experiment(second);

  std::map<std::string, std::string> files1, files2;
  for (const auto& entry : std::filesystem::directory_iterator(out1)) {
    files1[entry.path().filename().string()] = read_file(entry.path().string());
  }
  for (const auto& entry : std::filesystem::directory_iterator(out2)) {
    files2[entry.path().filename().string()] = read_file(entry.path().string());
  }
  ASSERT_FALSE(files1.empty());
  EXPECT_EQ(files1, files2);
}

TEST_F(HarnessRunTest, APersistentCacheEliminatesRepeatScoring) {
  const std::string out = dir_.file("out");
  json config_json = full_config(out);
  config_json["cache"] = dir_.file("cache.jsonl");

  const HarnessReport first = run_experiment(parse(config_json));
  EXPECT_GT(first.scorer_calls, 0u);

  const HarnessReport second = run_experiment(parse(config_json));
  EXPECT_EQ(second.scorer_calls, 0u);
  EXPECT_TRUE(second.complete);
}

TEST_F(HarnessRunTest, StratifiedSamplingIsRecordedInTheManifest) {
  const std::string out = dir_.file("out");
  json config_json = full_config(out);
  config_json["sample"] = json{{"cap", 2}, {"seed", 31}};

  const HarnessReport report = run_experiment(parse(config_json));
  EXPECT_LE(report.n_sampled, 24u);
  EXPECT_GE(report.n_sampled, 2u);

  const json manifest = json::parse(read_file(out + "/manifest.json"));
  EXPECT_EQ(manifest.at("sample_mode"), "stratified");
  EXPECT_EQ(manifest.at("seeds").at("sample"), 31);
}

TEST_F(HarnessRunTest, AFailedExperimentKeepsEarlierResultsAndTheManifest) {
  const std::string out = dir_.file("out");
  json config_json = minimal_config(corpus_path_, out);
  config_json["experiments"] = json::array(
      {json{{"kind", "duplicate"}, {"name", "first"}},
       json{{"kind", "rephrase_rgl"}, {"name", "bad"}, {"direction", "lower"},
            {"rephraser", "missing"}},
       json{{"kind", "duplicate"}, {"name", "last"}}});

  try {
    run_experiment(parse(config_json));
    FAIL() << "missing rephraser not detected";
  } catch (const ValidationError& e) {
    EXPECT_TRUE(contains(e.what(),
                         "experiment 'bad': no rephraser registered under id 'missing'"))
        << e.what();
  }

  EXPECT_TRUE(std::filesystem::exists(out + "/table_first.csv"));
  EXPECT_FALSE(std::filesystem::exists(out + "/table_last.csv"));

  const json manifest = json::parse(read_file(out + "/manifest.json"));
  EXPECT_FALSE(manifest.at("complete").get<bool>());
  const json& experiments = manifest.at("experiments");
  EXPECT_EQ(experiments[0].at("status"), "ok");
  EXPECT_EQ(experiments[1].at("status"),
            "failed: no rephraser registered under id 'missing'");
  EXPECT_EQ(experiments[2].at("status"), "not_run");
  EXPECT_EQ(experiments[2].at("rows"), 0);
}

TEST_F(HarnessRunTest, BaselineFailuresStillLeaveAManifest) {
  const std::string out = dir_.file("out");
  json config_json = minimal_config(corpus_path_, out);
  config_json["scorer"]["keywords"].erase("planning");

  EXPECT_THROW(run_experiment(parse(config_json)), ValidationError);

  const json manifest = json::parse(read_file(out + "/manifest.json"));
  EXPECT_FALSE(manifest.at("complete").get<bool>());
  EXPECT_EQ(manifest.at("experiments")[0].at("status"), "not_run");
}

TEST_F(HarnessRunTest, MissingCorpusFailsBeforeAnyOutput) {
  const std::string out = dir_.file("out");
  json config_json = minimal_config(dir_.file("nope.jsonl"), out);
  EXPECT_THROW(run_experiment(parse(config_json)), ValidationError);
  EXPECT_FALSE(std::filesystem::exists(out));
}

TEST_F(HarnessRunTest, SampleStageWritesTheSampleAndReturnsSortedIds) {
  const std::string out = dir_.file("out");
  const json config_json = minimal_config(corpus_path_, out);
  const std::vector<std::string> ids = run_sample_stage(parse(config_json));
  ASSERT_EQ(ids.size(), 24u);
  EXPECT_TRUE(std::is_sorted(ids.begin(), ids.end()));
  EXPECT_EQ(ids.front(), "resp-000");
  EXPECT_EQ(lines_of(read_file(out + "/sample.csv")).size(), 25u);
}

TEST_F(HarnessRunTest, PerturbStageWorksWithoutAnyScorer) {
  const std::string out = dir_.file("out");
  json config_json = minimal_config(corpus_path_, out);
  // A remote scorer that could never connect; variant generation must not care.
  config_json["scorer"] = json{{"kind", "remote"}, {"endpoint", "http://127.0.0.1:9"}};
  config_json["experiments"] = json::array(
      {json{{"kind", "duplicate"}, {"name", "dup"}},
       json{{"kind", "spelling_noise"}, {"name", "noise"}, {"cer", {0.1, 0.3}}, {"seed", 11}}});

  const std::vector<std::string> files = run_perturb_stage(parse(config_json));
  EXPECT_EQ(files,
            (std::vector<std::string>{"variants_dup.jsonl", "variants_noise.jsonl"}));

  const std::vector<std::string> dup_lines = lines_of(read_file(out + "/variants_dup.jsonl"));
  ASSERT_EQ(dup_lines.size(), 24u);
  const json line = json::parse(dup_lines[0]);
  const std::set<std::string> expected_keys = {"condition",          "variant_id",
                                               "source_response_id", "assigned_item_id",
                                               "label",              "text"};
  std::set<std::string> actual_keys;
  for (const auto& [key, value] : line.items()) actual_keys.insert(key);
  EXPECT_EQ(actual_keys, expected_keys);
  EXPECT_EQ(line.at("condition"), "duplicate");
  EXPECT_EQ(line.at("source_response_id"), "resp-000");

  EXPECT_EQ(lines_of(read_file(out + "/variants_noise.jsonl")).size(), 48u);
}

TEST_F(HarnessRunTest, ScoreStageFillsTheCacheOnceAndNeedsAPath) {
  const std::string out = dir_.file("out");
  json config_json = minimal_config(corpus_path_, out);

  try {
    run_score_stage(parse(config_json));
    FAIL() << "cache-less score stage accepted";
  } catch (const ValidationError& e) {
    EXPECT_TRUE(contains(e.what(), "needs a \"cache\" path")) << e.what();
  }

  config_json["cache"] = dir_.file("cache.jsonl");
  EXPECT_EQ(run_score_stage(parse(config_json)), 48u);  // 24 baseline + 24 duplicates
  EXPECT_EQ(run_score_stage(parse(config_json)), 0u);
}

TEST(AnalyzeSummariesTest, ComputesEffectsFromSummaryRows) {
  const json fixture = {
      {"title", "published comparison"},
      {"baseline",
       {{"label", "baseline"}, {"mean", 3.11}, {"sd", 1.17}, {"mean_word_count", 54.0}}},
      {"rows",
       json::array({json{{"label", "padded"}, {"mean", 2.82}, {"sd", 1.12}},
                    json{{"mean", 3.28}, {"sd", 1.02}, {"floor_rate", 0.037}}})}};
  const SummaryAnalysis analysis = analyze_summaries(fixture.dump());
  EXPECT_EQ(analysis.title, "published comparison");
  ASSERT_EQ(analysis.rows.size(), 3u);
  EXPECT_EQ(analysis.rows[0].variant, "baseline");
  EXPECT_FALSE(analysis.rows[0].d.has_value());
  EXPECT_DOUBLE_EQ(*analysis.rows[0].mean_word_count, 54.0);
  EXPECT_EQ(analysis.rows[1].variant, "padded");
  EXPECT_NEAR(*analysis.rows[1].d, -0.2532751091703057, 1e-12);
  EXPECT_EQ(analysis.rows[2].variant, "variant-1");
  EXPECT_NEAR(*analysis.rows[2].d, (3.28 - 3.11) / ((1.17 + 1.02) / 2.0), 1e-12);
  EXPECT_DOUBLE_EQ(*analysis.rows[2].floor_rate, 0.037);
  EXPECT_FALSE(analysis.rows[1].ci.has_value());
}

TEST(AnalyzeSummariesTest, RejectsBadFixtures) {
  EXPECT_THROW(analyze_summaries("nope"), ValidationError);
  EXPECT_THROW(analyze_summaries("{}"), ValidationError);
  EXPECT_THROW(analyze_summaries(R"({"baseline": {"mean": 3, "sd": 1}, "rows": []})"),
               ValidationError);
  EXPECT_THROW(
      analyze_summaries(
          R"({"baseline": {"mean": 3}, "rows": [{"mean": 2, "sd": 1}]})"),
      ValidationError);
  try {
    analyze_summaries(
        R"({"method": "d_z", "baseline": {"mean": 3, "sd": 1},
            "rows": [{"mean": 2, "sd": 1}]})");
    FAIL() << "summary-only d_z accepted";
  } catch (const ValidationError& e) {
    EXPECT_TRUE(contains(e.what(), "only the d_av method")) << e.what();
  }
}

}  // namespace
}  // namespace scoreprobe
