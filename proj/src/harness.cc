#include "scoreprobe/harness.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "scoreprobe/error.h"
#include "scoreprobe/perturb.h"
#include "scoreprobe/prng.h"
#include "scoreprobe/readability.h"
#include "scoreprobe/remote.h"
#include "scoreprobe/rephrase.h"
#include "scoreprobe/score_cache.h"

namespace scoreprobe {

namespace {

using nlohmann::json;

std::string hex16(uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string read_file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

struct Pipeline {
  Corpus corpus;
  uint64_t corpus_hash = 0;
  std::unique_ptr<CountingScorer> scorer;
  ScoreCache cache;
  RephraserRegistry rephrasers;
};

RephraserRegistry build_rephrasers(const ExperimentConfig& config) {
  RephraserRegistry registry = RephraserRegistry::with_builtins();
  if (config.remote_rephraser.has_value()) {
    const RephraserSettings& s = *config.remote_rephraser;
    RemoteRephraserConfig rc;
    rc.endpoint = s.endpoint;
    rc.timeout_ms = s.timeout_ms;
    rc.max_retries = s.max_retries;
    registry.add(std::make_shared<RemoteRephraser>(s.id, rc));
  }
  return registry;
}

Pipeline load_pipeline(const ExperimentConfig& config) {
  Pipeline p;
  p.corpus_hash = fnv1a64(read_file_bytes(config.corpus_path));
  p.corpus = load_corpus(config.corpus_path);
  p.scorer = std::make_unique<CountingScorer>(make_scorer(config.scorer));
  p.cache = ScoreCache::open(config.cache_path);
  p.rephrasers = build_rephrasers(config);
  return p;
}

std::vector<const Response*> sorted_responses(const Corpus& corpus) {
  std::vector<const Response*> out;
  out.reserve(corpus.responses().size());
  for (const Response& r : corpus.responses()) out.push_back(&r);
  std::sort(out.begin(), out.end(), [](const Response* a, const Response* b) {
    return a->response_id < b->response_id;
  });
  return out;
}

std::unordered_map<std::string, double> score_baseline(
    Pipeline& p, const ExperimentConfig& config,
    const std::vector<const Response*>& responses) {
  std::vector<ScoreRequest> requests;
  requests.reserve(responses.size());
  for (const Response* r : responses) {
    requests.push_back({&p.corpus.item(r->item_id), "baseline", r->text});
  }
  const std::vector<ScoreRecord> records =
      score_batch(*p.scorer, requests, p.cache, config.scorer.max_in_flight);
  std::unordered_map<std::string, double> scores;
  scores.reserve(records.size());
  for (size_t i = 0; i < records.size(); ++i) {
    scores[responses[i]->response_id] = records[i].score;
  }
  return scores;
}

std::vector<const Response*> select_sample(
    const Corpus& corpus, const std::unordered_map<std::string, double>& baseline,
    const SampleSettings& sample) {
  std::vector<std::string> ids;
  if (sample.use_all) {
    for (const Response& r : corpus.responses()) ids.push_back(r.response_id);
  } else {
    ids = stratified_sample(corpus, baseline, sample.cap, sample.seed);
  }
  std::sort(ids.begin(), ids.end());
  std::vector<const Response*> out;
  out.reserve(ids.size());
  for (const std::string& id : ids) out.push_back(corpus.find_response(id));
  return out;
}

std::string render_sample_csv(const std::vector<const Response*>& sampled,
                              const std::unordered_map<std::string, double>& baseline) {
  const ScoreBinning binning;
  std::ostringstream out;
  out << "response_id,item_id,baseline_score,bin,bin_label\n";
  for (const Response* r : sampled) {
    const double score = baseline.at(r->response_id);
    const int bin = bin_of(score, binning);
    out << csv_field(r->response_id) << ',' << csv_field(r->item_id) << ','
        << format_fixed(score, 4) << ',' << bin << ','
        << csv_field(binning.bin_label(bin)) << "\n";
  }
  return out.str();
}

struct GeneratedCondition {
  std::string label;
  std::optional<double> cer;
  std::vector<VariantRecord> variants;  // aligned with the sampled responses
};

AppendSpec make_append_spec(const ExperimentEntry& entry) {
  AppendSpec spec;
  switch (entry.kind) {
    case ExperimentKind::kDuplicate:
      spec.kind = AppendKind::kDuplicate;
      break;
    case ExperimentKind::kAppendCompetency:
      spec.kind = AppendKind::kCompetencyStatement;
      spec.competency_template = entry.competency_template;
      break;
    case ExperimentKind::kAppendScenario:
      spec.kind = AppendKind::kScenarioRephrase;
      break;
    case ExperimentKind::kAppendFormulaic:
      spec.kind = AppendKind::kFormulaic;
      spec.sentence = entry.sentence;
      break;
    default:
      throw ValidationError("not an append experiment");
  }
  return spec;
}

std::string append_label(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kDuplicate: return "duplicate";
    case ExperimentKind::kAppendCompetency: return "competency_statement";
    case ExperimentKind::kAppendScenario: return "scenario_rephrase";
    case ExperimentKind::kAppendFormulaic: return "formulaic";
    default: return "append";
  }
}

std::vector<GeneratedCondition> generate_conditions(
    const ExperimentEntry& entry, const std::vector<const Response*>& responses,
    const Corpus& corpus, const RephraserRegistry& rephrasers) {
  std::vector<GeneratedCondition> conditions;
  switch (entry.kind) {
    case ExperimentKind::kDuplicate:
    case ExperimentKind::kAppendCompetency:
    case ExperimentKind::kAppendScenario:
    case ExperimentKind::kAppendFormulaic: {
      const AppendSpec spec = make_append_spec(entry);
      GeneratedCondition condition;
      condition.label = append_label(entry.kind);
      for (const Response* r : responses) {
        condition.variants.push_back(append_variant(*r, corpus.item(r->item_id), spec));
      }
      conditions.push_back(std::move(condition));
      break;
    }
    case ExperimentKind::kSpellingNoise: {
      for (size_t k = 0; k < entry.cer_levels.size(); ++k) {
        const double cer = entry.cer_levels[k];
        GeneratedCondition condition;
        condition.label = "cer=" + format_fixed(cer, 2);
        condition.cer = cer;
        const uint64_t level_seed =
            derive_seed(entry.seed, "level-" + std::to_string(k));
        for (const Response* r : responses) {
          SpellingNoiseSpec spec;
          spec.cer = cer;
          spec.dist = entry.dist;
          std::string text;
          if (entry.coupled) {
            spec.seed = derive_seed(entry.seed, r->response_id);
            text = inject_spelling_noise_coupled(r->text, entry.cer_levels, entry.dist,
                                                 spec.seed)[k];
          } else {
            spec.seed = derive_seed(level_seed, r->response_id);
            text = inject_spelling_noise(r->text, cer, entry.dist, spec.seed);
          }
          VariantRecord variant;
          variant.variant_id = make_variant_id(r->response_id, spec);
          variant.source_response_id = r->response_id;
          variant.assigned_item_id = r->item_id;
          variant.label = spec_label(spec);
          variant.text = std::move(text);
          condition.variants.push_back(std::move(variant));
        }
        conditions.push_back(std::move(condition));
      }
      break;
    }
    case ExperimentKind::kRephraseRgl: {
      GeneratedCondition condition;
      if (entry.rephrase.direction.has_value()) {
        condition.label = *entry.rephrase.direction == RglDirection::kLower
                              ? "rephrase_lower"
                              : "rephrase_higher";
      } else {
        condition.label = "rephrase_target=" + format_fixed(*entry.rephrase.target_rgl, 1);
      }
      for (const Response* r : responses) {
        VariantRecord variant;
        variant.variant_id = make_variant_id(r->response_id, entry.rephrase);
        variant.source_response_id = r->response_id;
        variant.assigned_item_id = r->item_id;
        variant.label = spec_label(entry.rephrase);
        variant.text = rephrase_rgl(r->text, entry.rephrase, rephrasers);
        condition.variants.push_back(std::move(variant));
      }
      conditions.push_back(std::move(condition));
      break;
    }
    case ExperimentKind::kCrossItem: {
      CrossItemSpec spec;
      spec.mode = entry.mode;
      spec.seed = entry.seed;
      GeneratedCondition condition;
      condition.label = entry.mode == PermutationMode::kSameCompetency
                            ? "cross_item_same_competency"
                            : "cross_item_different_competency";
      std::vector<std::pair<std::string, std::string>> response_items;
      for (const Response* r : responses) {
        response_items.emplace_back(r->response_id, r->item_id);
      }
      std::unordered_map<std::string, std::string> item_competency;
      for (const Item& item : corpus.items()) {
        item_competency[item.item_id] = item.competency;
      }
      const auto mapping =
          cross_item_permutation(response_items, item_competency, entry.mode, entry.seed);
      for (const Response* r : responses) {
        VariantRecord variant;
        variant.variant_id = make_variant_id(r->response_id, spec);
        variant.source_response_id = r->response_id;
        variant.assigned_item_id = mapping.at(r->response_id);
        variant.label = spec_label(spec);
        variant.text = r->text;
        condition.variants.push_back(std::move(variant));
      }
      conditions.push_back(std::move(condition));
      break;
    }
  }
  return conditions;
}

double mean_word_count(const std::vector<const Response*>& responses) {
  double total = 0.0;
  for (const Response* r : responses) total += word_count(r->text);
  return total / static_cast<double>(responses.size());
}

double mean_variant_word_count(const std::vector<VariantRecord>& variants) {
  double total = 0.0;
  for (const VariantRecord& v : variants) total += word_count(v.text);
  return total / static_cast<double>(variants.size());
}

ReadabilityRow readability_means(const std::string& label,
                                 const std::vector<std::string>& texts) {
  ReadabilityRow row;
  row.variant = label;
  for (const std::string& text : texts) {
    const TextMetrics m = text_metrics(text);
    row.mean_rgl += fk_from_ratios(m.words_per_sentence(), m.syllables_per_word());
    row.mean_words += m.n_words;
    row.mean_sentences += m.n_sentences;
    row.mean_wps += m.words_per_sentence();
    row.mean_spw += m.syllables_per_word();
  }
  const double n = static_cast<double>(texts.size());
  row.mean_rgl /= n;
  row.mean_words /= n;
  row.mean_sentences /= n;
  row.mean_wps /= n;
  row.mean_spw /= n;
  return row;
}

FigurePoint mean_ci_point(double cer, const std::vector<double>& scores) {
  const SummaryStats s = summarize(scores);
  const double half = 1.96 * s.sd / std::sqrt(static_cast<double>(s.n));
  return FigurePoint{cer, s.mean, s.mean - half, s.mean + half};
}

ReportRow row_from_condition(const ConditionReport& condition) {
  ReportRow row;
  row.variant = condition.label;
  row.mean_word_count = condition.mean_word_count;
  row.mean_score = condition.effect.variant.mean;
  row.sd = condition.effect.variant.sd;
  row.d = condition.effect.d;
  row.ci = condition.effect.ci;
  row.floor_rate = condition.floor.fraction;
  return row;
}

struct ExperimentStatus {
  std::string status = "not_run";
  size_t rows = 0;
  std::vector<std::string> files;
};

void write_manifest(const ExperimentConfig& config, const HarnessReport& report,
                    const std::vector<ExperimentStatus>& statuses, bool complete) {
  json m;
  m["complete"] = complete;
  m["config_hash"] = hex16(config.config_hash);
  m["corpus_hash"] = hex16(report.corpus_hash);
  m["scorer_id"] = config.scorer.scorer_id;
  m["method"] = to_string(config.stats.method);
  m["bootstrap_reps"] = config.stats.bootstrap_reps;
  m["n_sampled"] = report.n_sampled;
  m["sample_mode"] = config.sample.use_all ? "use-all" : "stratified";

  json seeds;
  seeds["stats"] = config.stats.seed;
  if (!config.sample.use_all) seeds["sample"] = config.sample.seed;
  json experiment_seeds = json::object();
  for (const ExperimentEntry& entry : config.experiments) {
    if (entry.kind == ExperimentKind::kSpellingNoise ||
        entry.kind == ExperimentKind::kCrossItem) {
      experiment_seeds[entry.name] = entry.seed;
    }
  }
  seeds["experiments"] = experiment_seeds;
  m["seeds"] = seeds;

  json experiments = json::array();
  for (size_t i = 0; i < config.experiments.size(); ++i) {
    json e;
    e["name"] = config.experiments[i].name;
    e["kind"] = to_string(config.experiments[i].kind);
    e["status"] = statuses[i].status;
    e["rows"] = statuses[i].rows;
    e["files"] = statuses[i].files;
    experiments.push_back(std::move(e));
  }
  m["experiments"] = experiments;

  const std::filesystem::path path =
      std::filesystem::path(config.output_dir) / "manifest.json";
  write_text_file(path.string(), m.dump(2) + "\n");
}

ExperimentOutcome run_one_experiment(const ExperimentEntry& entry,
                                     const ExperimentConfig& config, Pipeline& p,
                                     const std::vector<const Response*>& sampled,
                                     const std::vector<double>& baseline_scores,
                                     const ReportRow& baseline_row) {
  ExperimentOutcome outcome;
  outcome.name = entry.name;
  outcome.kind = entry.kind;
  outcome.rows.push_back(baseline_row);

  std::vector<GeneratedCondition> generated =
      generate_conditions(entry, sampled, p.corpus, p.rephrasers);

  std::vector<FigurePoint> figure;
  std::vector<ReadabilityRow> readability;
  if (entry.kind == ExperimentKind::kSpellingNoise) {
    figure.push_back(mean_ci_point(0.0, baseline_scores));
  }
  if (entry.kind == ExperimentKind::kRephraseRgl) {
    std::vector<std::string> texts;
    for (const Response* r : sampled) texts.push_back(r->text);
    readability.push_back(readability_means("baseline", texts));
  }

  for (GeneratedCondition& condition : generated) {
    try {
      if (condition.variants.size() != sampled.size()) {
        throw RuntimeFailure("variant count " + std::to_string(condition.variants.size()) +
                             " does not match sample size " +
                             std::to_string(sampled.size()));
      }
      std::vector<ScoreRequest> requests;
      requests.reserve(condition.variants.size());
      for (const VariantRecord& v : condition.variants) {
        requests.push_back({&p.corpus.item(v.assigned_item_id), v.variant_id, v.text});
      }
      const std::vector<ScoreRecord> records =
          score_batch(*p.scorer, requests, p.cache, config.scorer.max_in_flight);
      std::vector<double> variant_scores;
      variant_scores.reserve(records.size());
      for (const ScoreRecord& rec : records) variant_scores.push_back(rec.score);

      ConditionReport condition_report;
      condition_report.label = condition.label;
      condition_report.cer = condition.cer;
      condition_report.effect =
          paired_effect(baseline_scores, variant_scores, config.stats.method);
      BootstrapOptions boot;
      boot.reps = config.stats.bootstrap_reps;
      boot.seed = derive_seed(config.stats.seed, entry.name + "/" + condition.label);
      condition_report.effect.ci =
          bootstrap_ci(baseline_scores, variant_scores, config.stats.method, boot);
      condition_report.mean_word_count = mean_variant_word_count(condition.variants);
      condition_report.floor = floor_rate(variant_scores);

      if (entry.kind == ExperimentKind::kSpellingNoise) {
        figure.push_back(mean_ci_point(*condition.cer, variant_scores));
      }
      if (entry.kind == ExperimentKind::kRephraseRgl) {
        std::vector<std::string> texts;
        for (const VariantRecord& v : condition.variants) texts.push_back(v.text);
        condition_report.readability = readability_means(condition.label, texts);
        readability.push_back(*condition_report.readability);
      }

      outcome.rows.push_back(row_from_condition(condition_report));
      outcome.conditions.push_back(std::move(condition_report));
    } catch (const ValidationError& e) {
      throw ValidationError("condition '" + condition.label + "': " + e.what());
    } catch (const std::exception& e) {
      throw RuntimeFailure("condition '" + condition.label + "': " + e.what());
    }
  }

  const std::filesystem::path dir(config.output_dir);
  const std::string csv_name = "table_" + entry.name + ".csv";
  const std::string md_name = "table_" + entry.name + ".md";
  write_text_file((dir / csv_name).string(), render_table_csv(outcome.rows));
  write_text_file((dir / md_name).string(),
                  render_table_markdown(entry.name, outcome.rows));
  outcome.files.push_back(csv_name);
  outcome.files.push_back(md_name);
  if (!figure.empty()) {
    const std::string figure_name = "figure_" + entry.name + ".csv";
    write_text_file((dir / figure_name).string(), render_figure_csv(figure));
    outcome.files.push_back(figure_name);
  }
  if (!readability.empty()) {
    const std::string readability_name = "readability_" + entry.name + ".csv";
    write_text_file((dir / readability_name).string(),
                    render_readability_csv(readability));
    outcome.files.push_back(readability_name);
  }
  return outcome;
}

}  // namespace

HarnessReport run_experiment(const ExperimentConfig& config) {
  config.validate();
  Pipeline p = load_pipeline(config);

  HarnessReport report;
  report.config_hash = config.config_hash;
  report.corpus_hash = p.corpus_hash;
  report.output_dir = config.output_dir;

  std::vector<ExperimentStatus> statuses(config.experiments.size());
  auto finish_with_failure = [&](size_t index, const std::string& message) {
    if (index < statuses.size()) statuses[index].status = "failed: " + message;
    report.complete = false;
    report.scorer_calls = p.scorer->calls();
    try {
      write_manifest(config, report, statuses, false);
    } catch (...) {
      // The original error matters more than a manifest write failure.
    }
  };

  std::vector<const Response*> sampled;
  std::vector<double> baseline_scores;
  ReportRow baseline_row;
  try {
    const std::vector<const Response*> all = sorted_responses(p.corpus);
    const std::unordered_map<std::string, double> baseline = score_baseline(p, config, all);
    sampled = select_sample(p.corpus, baseline, config.sample);
    report.n_sampled = sampled.size();

    write_text_file(
        (std::filesystem::path(config.output_dir) / "sample.csv").string(),
        render_sample_csv(sampled, baseline));

    baseline_scores.reserve(sampled.size());
    for (const Response* r : sampled) baseline_scores.push_back(baseline.at(r->response_id));

    const SummaryStats base_stats = summarize(baseline_scores);
    baseline_row.variant = "baseline";
    baseline_row.mean_word_count = mean_word_count(sampled);
    baseline_row.mean_score = base_stats.mean;
    baseline_row.sd = base_stats.sd;
    baseline_row.floor_rate = floor_rate(baseline_scores).fraction;
  } catch (const ValidationError&) {
    finish_with_failure(statuses.size(), "");
    throw;
  } catch (const std::exception&) {
    finish_with_failure(statuses.size(), "");
    throw;
  }

  for (size_t i = 0; i < config.experiments.size(); ++i) {
    const ExperimentEntry& entry = config.experiments[i];
    try {
      ExperimentOutcome outcome =
          run_one_experiment(entry, config, p, sampled, baseline_scores, baseline_row);
      statuses[i].status = "ok";
      statuses[i].rows = outcome.rows.size();
      statuses[i].files = outcome.files;
      report.experiments.push_back(std::move(outcome));
    } catch (const ValidationError& e) {
      finish_with_failure(i, e.what());
      throw ValidationError("experiment '" + entry.name + "': " + e.what());
    } catch (const std::exception& e) {
      finish_with_failure(i, e.what());
      throw RuntimeFailure("experiment '" + entry.name + "': " + e.what());
    }
  }

  report.complete = true;
  report.scorer_calls = p.scorer->calls();
  write_manifest(config, report, statuses, true);
  return report;
}

std::vector<std::string> run_sample_stage(const ExperimentConfig& config) {
  config.validate();
  Pipeline p = load_pipeline(config);
  const std::vector<const Response*> all = sorted_responses(p.corpus);
  const std::unordered_map<std::string, double> baseline = score_baseline(p, config, all);
  const std::vector<const Response*> sampled =
      select_sample(p.corpus, baseline, config.sample);
  write_text_file(
      (std::filesystem::path(config.output_dir) / "sample.csv").string(),
      render_sample_csv(sampled, baseline));
  std::vector<std::string> ids;
  ids.reserve(sampled.size());
  for (const Response* r : sampled) ids.push_back(r->response_id);
  return ids;
}

std::vector<std::string> run_perturb_stage(const ExperimentConfig& config) {
  config.validate();
  const Corpus corpus = load_corpus(config.corpus_path);
  const RephraserRegistry rephrasers = build_rephrasers(config);
  const std::vector<const Response*> responses = sorted_responses(corpus);

  std::vector<std::string> files;
  for (const ExperimentEntry& entry : config.experiments) {
    const std::vector<GeneratedCondition> generated =
        generate_conditions(entry, responses, corpus, rephrasers);
    std::ostringstream out;
    for (const GeneratedCondition& condition : generated) {
      for (const VariantRecord& v : condition.variants) {
        json line{{"condition", condition.label},
                  {"variant_id", v.variant_id},
                  {"source_response_id", v.source_response_id},
                  {"assigned_item_id", v.assigned_item_id},
                  {"label", v.label},
                  {"text", v.text}};
        out << line.dump() << "\n";
      }
    }
    const std::string name = "variants_" + entry.name + ".jsonl";
    write_text_file(
        (std::filesystem::path(config.output_dir) / name).string(), out.str());
    files.push_back(name);
  }
  return files;
}

size_t run_score_stage(const ExperimentConfig& config) {
  config.validate();
  if (config.cache_path.empty()) {
    throw ValidationError("the score stage needs a \"cache\" path; "
                          "without one its results would be discarded");
  }
  Pipeline p = load_pipeline(config);
  const std::vector<const Response*> all = sorted_responses(p.corpus);
  const std::unordered_map<std::string, double> baseline = score_baseline(p, config, all);
  const std::vector<const Response*> sampled =
      select_sample(p.corpus, baseline, config.sample);

  for (const ExperimentEntry& entry : config.experiments) {
    const std::vector<GeneratedCondition> generated =
        generate_conditions(entry, sampled, p.corpus, p.rephrasers);
    for (const GeneratedCondition& condition : generated) {
      std::vector<ScoreRequest> requests;
      requests.reserve(condition.variants.size());
      for (const VariantRecord& v : condition.variants) {
        requests.push_back({&p.corpus.item(v.assigned_item_id), v.variant_id, v.text});
      }
      score_batch(*p.scorer, requests, p.cache, config.scorer.max_in_flight);
    }
  }
  return p.scorer->calls();
}

SummaryAnalysis analyze_summaries(const std::string& fixture_json) {
  json root;
  try {
    root = json::parse(fixture_json);
  } catch (const std::exception& e) {
    throw ValidationError(std::string("summary fixture is not valid JSON: ") + e.what());
  }
  if (!root.is_object() || !root.contains("baseline") || !root.contains("rows")) {
    throw ValidationError("summary fixture needs \"baseline\" and \"rows\"");
  }
  if (root.contains("method") && root.at("method").get<std::string>() != "d_av") {
    throw ValidationError("summary-only analysis supports only the d_av method");
  }

  auto parse_row = [](const json& obj, const std::string& fallback_label) {
    if (!obj.is_object() || !obj.contains("mean") || !obj.contains("sd")) {
      throw ValidationError("summary rows need \"mean\" and \"sd\"");
    }
    ReportRow row;
    row.variant = obj.value("label", fallback_label);
    row.mean_score = obj.at("mean").get<double>();
    row.sd = obj.at("sd").get<double>();
    if (obj.contains("mean_word_count")) {
      row.mean_word_count = obj.at("mean_word_count").get<double>();
    }
    if (obj.contains("floor_rate")) {
      row.floor_rate = obj.at("floor_rate").get<double>();
    }
    return row;
  };

  SummaryAnalysis analysis;
  analysis.title = root.value("title", std::string("summary analysis"));
  ReportRow baseline = parse_row(root.at("baseline"), "baseline");
  analysis.rows.push_back(baseline);
  size_t index = 0;
  for (const json& obj : root.at("rows")) {
    ReportRow row = parse_row(obj, "variant-" + std::to_string(index++));
    row.d = effect_from_summaries(baseline.mean_score, baseline.sd, row.mean_score, row.sd);
    analysis.rows.push_back(std::move(row));
  }
  if (analysis.rows.size() < 2) {
    throw ValidationError("summary fixture has no variant rows");
  }
  return analysis;
}

}  // namespace scoreprobe
