#pragma once

#include <cstdint>
#include <utility>
#include <variant>
#include <vector>

#include "scoreprobe/stats.h"

namespace scoreprobe {

// Bivariate normal model of (baseline, variant) scores with correlation rho.
struct ParametricModel {
  double mean_b = 3.0;
  double sd_b = 1.0;
  double sd_v = 1.0;
  double rho = 0.5;
  double mean_diff = 0.0;  // variant mean minus baseline mean

  void validate() const;
};

// Resamples observed (baseline, variant) pairs with replacement.
struct PilotModel {
  std::vector<std::pair<double, double>> pairs;

  void validate() const;  // needs at least 2 pairs
};

using PowerModel = std::variant<ParametricModel, PilotModel>;

struct PowerOptions {
  double target_width = 0.2;
  double level = 0.95;
  EffectMethod method = EffectMethod::kDAv;
  int trials = 40;          // simulated datasets per candidate n
  int bootstrap_reps = 800; // per simulated dataset
  int n_ceiling = 8192;
  uint64_t seed = 0;
};

// Median bootstrap CI width of the effect size over simulated datasets of
// n pairs. Trial t draws its data from SeededPrng::substream(seed, t); for
// a fixed seed, larger n extends each trial's dataset rather than redrawing
// it, so widths vary smoothly in n.
double median_ci_width(const PowerModel& model, int n, const PowerOptions& options);

// Smallest n whose median CI width is at most target_width (binary search
// from a floor of 8 pairs, below which resampling is too degenerate to
// trust; errors when even n_ceiling is too narrow a budget).
int min_n_for_ci_width(const PowerModel& model, const PowerOptions& options);

struct PowerReport {
  double target_width = 0.0;
  double level = 0.95;
  EffectMethod method = EffectMethod::kDAv;
  int min_n = 0;
  double width_at_min_n = 0.0;
  // Sensitivity band: the same search at a 10% looser / tighter target.
  int plausible_lo = 0;
  int plausible_hi = 0;
};

PowerReport power_report(const PowerModel& model, const PowerOptions& options);

// CSV of observed pairs, one "baseline,variant" line each; a non-numeric
// first line is treated as a header.
PilotModel load_pilot_pairs(const std::string& path);

}  // namespace scoreprobe
