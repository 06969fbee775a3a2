#include "scoreprobe/stats.h"

#include <algorithm>
#include <cmath>

#include "scoreprobe/error.h"
#include "scoreprobe/prng.h"

namespace scoreprobe {

namespace {

double sample_sd(const std::vector<double>& values, double mean) {
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / (static_cast<double>(values.size()) - 1.0));
}

// nullopt when the method's denominator is zero.
std::optional<double> effect_or_degenerate(const std::vector<double>& baseline,
                                           const std::vector<double>& variant,
                                           EffectMethod method) {
  const size_t n = baseline.size();
  double mean_b = 0.0, mean_v = 0.0;
  for (size_t i = 0; i < n; ++i) {
    mean_b += baseline[i];
    mean_v += variant[i];
  }
  mean_b /= static_cast<double>(n);
  mean_v /= static_cast<double>(n);

  double denom = 0.0;
  if (method == EffectMethod::kDAv) {
    denom = (sample_sd(baseline, mean_b) + sample_sd(variant, mean_v)) / 2.0;
  } else {
    double ss = 0.0;
    const double mean_diff = mean_v - mean_b;
    for (size_t i = 0; i < n; ++i) {
      const double d = variant[i] - baseline[i] - mean_diff;
      ss += d * d;
    }
    denom = std::sqrt(ss / (static_cast<double>(n) - 1.0));
  }
  if (denom <= 0.0) return std::nullopt;
  return (mean_v - mean_b) / denom;
}

}  // namespace

SummaryStats summarize(const std::vector<double>& values) {
  if (values.size() < 2) {
    throw ValidationError("summarize needs at least 2 values, got " +
                          std::to_string(values.size()));
  }
  SummaryStats s;
  s.n = values.size();
  double total = 0.0;
  for (double v : values) total += v;
  s.mean = total / static_cast<double>(s.n);
  s.sd = sample_sd(values, s.mean);
  return s;
}

EffectMethod effect_method_from_string(const std::string& name) {
  if (name == "d_av") return EffectMethod::kDAv;
  if (name == "d_z") return EffectMethod::kDZ;
  throw ValidationError("unknown effect method '" + name + "' (expected d_av or d_z)");
}

std::string to_string(EffectMethod method) {
  return method == EffectMethod::kDAv ? "d_av" : "d_z";
}

PairedEffectReport paired_effect(const std::vector<double>& baseline,
                                 const std::vector<double>& variant, EffectMethod method) {
  if (baseline.size() != variant.size()) {
    throw ValidationError("paired effect needs equal-length vectors, got " +
                          std::to_string(baseline.size()) + " and " +
                          std::to_string(variant.size()));
  }
  PairedEffectReport report;
  report.n_pairs = baseline.size();
  report.baseline = summarize(baseline);
  report.variant = summarize(variant);
  report.mean_diff = report.variant.mean - report.baseline.mean;
  report.method = method;
  const std::optional<double> d = effect_or_degenerate(baseline, variant, method);
  if (!d.has_value()) {
    throw ValidationError(std::string("effect size ") + to_string(method) +
                          " is undefined here: zero denominator");
  }
  report.d = *d;
  return report;
}

double effect_from_summaries(double mean_b, double sd_b, double mean_v, double sd_v) {
  const double denom = (sd_b + sd_v) / 2.0;
  if (denom <= 0.0) throw ValidationError("effect size undefined: zero average sd");
  return (mean_v - mean_b) / denom;
}

double quantile_sorted(const std::vector<double>& sorted_values, double q) {
  if (sorted_values.empty()) throw ValidationError("quantile of empty vector");
  if (q < 0.0 || q > 1.0) throw ValidationError("quantile level must be in [0,1]");
  const double pos = q * (static_cast<double>(sorted_values.size()) - 1.0);
  const size_t lo = static_cast<size_t>(pos);
  if (lo + 1 >= sorted_values.size()) return sorted_values.back();
  const double frac = pos - static_cast<double>(lo);
  return sorted_values[lo] * (1.0 - frac) + sorted_values[lo + 1] * frac;
}

Ci bootstrap_ci(const std::vector<double>& baseline, const std::vector<double>& variant,
                EffectMethod method, const BootstrapOptions& options) {
  if (baseline.size() != variant.size()) {
    throw ValidationError("bootstrap needs equal-length vectors");
  }
  const size_t n = baseline.size();
  if (n < 2) throw ValidationError("bootstrap needs at least 2 pairs");
  if (options.reps < 1) throw ValidationError("bootstrap reps must be >= 1");
  if (options.level <= 0.0 || options.level >= 1.0) {
    throw ValidationError("bootstrap level must be in (0,1)");
  }

  std::vector<double> estimates;
  estimates.reserve(static_cast<size_t>(options.reps));
  std::vector<double> rb(n), rv(n);
  int degenerate = 0;
  for (int r = 0; r < options.reps; ++r) {
    SeededPrng prng = SeededPrng::substream(options.seed, static_cast<uint64_t>(r));
    for (size_t i = 0; i < n; ++i) {
      const uint64_t idx = prng.next_below(n);
      rb[i] = baseline[idx];
      rv[i] = variant[idx];
    }
    const std::optional<double> d = effect_or_degenerate(rb, rv, method);
    if (d.has_value()) {
      estimates.push_back(*d);
    } else {
      ++degenerate;
    }
  }
  if (static_cast<double>(degenerate) > 0.01 * static_cast<double>(options.reps) ||
      estimates.empty()) {
    throw RuntimeFailure("bootstrap interval unstable: " + std::to_string(degenerate) +
                         " of " + std::to_string(options.reps) +
                         " replicates had a zero denominator");
  }
  std::sort(estimates.begin(), estimates.end());
  const double alpha = 1.0 - options.level;
  Ci ci;
  ci.lo = quantile_sorted(estimates, alpha / 2.0);
  ci.hi = quantile_sorted(estimates, 1.0 - alpha / 2.0);
  ci.level = options.level;
  return ci;
}

FloorRate floor_rate(const std::vector<double>& scores, double floor, double tol) {
  if (scores.empty()) throw ValidationError("floor rate of empty score vector");
  FloorRate rate;
  rate.n = scores.size();
  rate.floor = floor;
  for (double s : scores) {
    if (std::abs(s - floor) <= tol) ++rate.n_at_floor;
  }
  rate.fraction = static_cast<double>(rate.n_at_floor) / static_cast<double>(rate.n);
  return rate;
}

}  // namespace scoreprobe
