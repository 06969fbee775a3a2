#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace scoreprobe {

struct SummaryStats {
  size_t n = 0;
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation (n-1 denominator)
};

// Requires at least two values.
SummaryStats summarize(const std::vector<double>& values);

// How the paired effect size is standardized:
//   kDAv divides the mean difference by the average of the two sds,
//   kDZ  divides it by the sd of the per-pair differences.
enum class EffectMethod { kDAv, kDZ };

EffectMethod effect_method_from_string(const std::string& name);
std::string to_string(EffectMethod method);

struct Ci {
  double lo = 0.0;
  double hi = 0.0;
  double level = 0.95;
};

struct PairedEffectReport {
  size_t n_pairs = 0;
  SummaryStats baseline;
  SummaryStats variant;
  double mean_diff = 0.0;  // variant minus baseline
  double d = 0.0;
  EffectMethod method = EffectMethod::kDAv;
  std::optional<Ci> ci;
};

// Paired effect size over equal-length score vectors (>= 2 pairs). Throws
// when the chosen method's denominator is zero.
PairedEffectReport paired_effect(const std::vector<double>& baseline,
                                 const std::vector<double>& variant,
                                 EffectMethod method = EffectMethod::kDAv);

// kDAv from published-style summary rows (no per-pair data).
double effect_from_summaries(double mean_b, double sd_b, double mean_v, double sd_v);

struct BootstrapOptions {
  int reps = 10000;
  double level = 0.95;
  uint64_t seed = 0;
};

// Seeded percentile bootstrap over resampled pair indices. Replicate r draws
// from SeededPrng::substream(seed, r), so results are independent of rep
// scheduling. Replicates with a zero denominator are skipped; more than 1%
// skipped is an error rather than a quietly unstable interval.
Ci bootstrap_ci(const std::vector<double>& baseline, const std::vector<double>& variant,
                EffectMethod method, const BootstrapOptions& options);

// Linearly interpolated quantile of an ascending-sorted vector, q in [0,1].
double quantile_sorted(const std::vector<double>& sorted_values, double q);

struct FloorRate {
  size_t n = 0;
  size_t n_at_floor = 0;
  double floor = 1.0;
  double fraction = 0.0;
};

FloorRate floor_rate(const std::vector<double>& scores, double floor = 1.0,
                     double tol = 1e-9);

}  // namespace scoreprobe
