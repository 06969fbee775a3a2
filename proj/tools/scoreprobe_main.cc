#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "scoreprobe/config.h"
#include "scoreprobe/error.h"
#include "scoreprobe/harness.h"
#include "scoreprobe/power.h"
#include "scoreprobe/report.h"

namespace {

using scoreprobe::ExperimentConfig;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

struct CommonOptions {
  std::string config_path;
  std::string out_dir;
  bool has_seed_override = false;
  uint64_t seed_override = 0;
};

ExperimentConfig load_config(const CommonOptions& options) {
  ExperimentConfig config = scoreprobe::load_experiment_config(options.config_path);
  if (!options.out_dir.empty()) config.output_dir = options.out_dir;
  if (options.has_seed_override) {
    scoreprobe::apply_seed_override(config, options.seed_override);
  }
  return config;
}

void add_common(CLI::App* cmd, CommonOptions& options, bool with_out = true) {
  cmd->add_option("--config", options.config_path, "experiment config (JSON)")
      ->required();
  if (with_out) {
    cmd->add_option("--out", options.out_dir, "override the config's output_dir");
  }
  cmd->add_option("--seed-override", options.seed_override,
                  "rederive every seed from this master seed")
      ->each([&options](const std::string&) { options.has_seed_override = true; });
}

int run_command(const CommonOptions& options) {
  const ExperimentConfig config = load_config(options);
  const scoreprobe::HarnessReport report = scoreprobe::run_experiment(config);
  std::cout << "wrote " << report.experiments.size() << " experiment report(s) to "
            << report.output_dir << " (" << report.n_sampled << " responses, "
            << report.scorer_calls << " live scorer calls)\n";
  return kExitOk;
}

int sample_command(const CommonOptions& options) {
  const ExperimentConfig config = load_config(options);
  const std::vector<std::string> ids = scoreprobe::run_sample_stage(config);
  std::cout << "sampled " << ids.size() << " responses; wrote sample.csv to "
            << config.output_dir << "\n";
  return kExitOk;
}

int perturb_command(const CommonOptions& options) {
  const ExperimentConfig config = load_config(options);
  const std::vector<std::string> files = scoreprobe::run_perturb_stage(config);
  std::cout << "wrote " << files.size() << " variant file(s) to " << config.output_dir
            << "\n";
  return kExitOk;
}

int score_command(const CommonOptions& options) {
  const ExperimentConfig config = load_config(options);
  const size_t calls = scoreprobe::run_score_stage(config);
  std::cout << "scoring complete; " << calls << " live scorer calls, cache at "
            << config.cache_path << "\n";
  return kExitOk;
}

int analyze_command(const std::string& summaries_path, const std::string& out_dir) {
  std::ifstream in(summaries_path);
  if (!in) {
    throw scoreprobe::ValidationError("cannot open summaries '" + summaries_path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const scoreprobe::SummaryAnalysis analysis =
      scoreprobe::analyze_summaries(buffer.str());
  const std::string csv = scoreprobe::render_table_csv(analysis.rows);
  const std::string md =
      scoreprobe::render_table_markdown(analysis.title, analysis.rows);
  if (out_dir.empty()) {
    std::cout << csv;
  } else {
    const std::filesystem::path dir(out_dir);
    scoreprobe::write_text_file((dir / "summary_table.csv").string(), csv);
    scoreprobe::write_text_file((dir / "summary_table.md").string(), md);
    std::cout << "wrote summary_table.csv and summary_table.md to " << out_dir << "\n";
  }
  return kExitOk;
}

int power_command(const CommonOptions& options, bool has_target, double target_width) {
  const ExperimentConfig config = load_config(options);
  if (!config.power.has_value()) {
    throw scoreprobe::ValidationError("config has no \"power\" section");
  }
  scoreprobe::PowerOptions power_options = config.power->options;
  if (has_target) power_options.target_width = target_width;
  const scoreprobe::PowerReport report =
      scoreprobe::power_report(config.power->model, power_options);

  nlohmann::json out;
  out["target_width"] = report.target_width;
  out["level"] = report.level;
  out["method"] = scoreprobe::to_string(report.method);
  out["min_n"] = report.min_n;
  out["width_at_min_n"] = report.width_at_min_n;
  out["plausible_n"] = {report.plausible_lo, report.plausible_hi};
  scoreprobe::write_text_file(
      (std::filesystem::path(config.output_dir) / "power.json").string(),
      out.dump(2) + "\n");
  std::cout << "min n = " << report.min_n << " for CI width <= " << report.target_width
            << " (median width " << scoreprobe::format_fixed(report.width_at_min_n, 4)
            << ", plausible range " << report.plausible_lo << ".." << report.plausible_hi
            << ")\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"robustness harness for automated open-response scoring"};
  app.require_subcommand(1);

  CommonOptions run_options;
  CLI::App* run = app.add_subcommand("run", "full pipeline: sample, perturb, score, report");
  add_common(run, run_options);

  CommonOptions sample_options;
  CLI::App* sample =
      app.add_subcommand("sample", "baseline scoring + stratified sample only");
  add_common(sample, sample_options);

  CommonOptions perturb_options;
  CLI::App* perturb =
      app.add_subcommand("perturb", "generate variant datasets without scoring");
  add_common(perturb, perturb_options);

  CommonOptions score_options;
  CLI::App* score =
      app.add_subcommand("score", "fill the score cache for baseline and variants");
  add_common(score, score_options);

  std::string summaries_path;
  std::string analyze_out;
  CLI::App* analyze =
      app.add_subcommand("analyze", "effect sizes from published-style summary rows");
  analyze->add_option("--summaries", summaries_path, "summary fixture (JSON)")
      ->required();
  analyze->add_option("--out", analyze_out, "directory for summary_table.{csv,md}");

  CommonOptions power_options;
  double target_width = 0.2;
  CLI::App* power = app.add_subcommand("power", "minimum sample size for a CI width");
  add_common(power, power_options);
  CLI::Option* target_opt =
      power->add_option("--target-width", target_width, "CI width to reach (default 0.2)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return run_command(run_options);
    if (sample->parsed()) return sample_command(sample_options);
    if (perturb->parsed()) return perturb_command(perturb_options);
    if (score->parsed()) return score_command(score_options);
    if (analyze->parsed()) return analyze_command(summaries_path, analyze_out);
    if (power->parsed()) {
      return power_command(power_options, target_opt->count() > 0, target_width);
    }
  } catch (const scoreprobe::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitValidation;
}
