#include "scoreprobe/power.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>

#include "scoreprobe/error.h"
#include "scoreprobe/prng.h"

namespace scoreprobe {

namespace {

// Box-Muller; consumes exactly two uniforms per call.
std::pair<double, double> normal_pair(SeededPrng& prng) {
  double u1 = prng.next_double();
  const double u2 = prng.next_double();
  if (u1 <= 0.0) u1 = 0x1.0p-53;
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  return {r * std::cos(theta), r * std::sin(theta)};
}

void simulate(const PowerModel& model, int n, SeededPrng& prng,
              std::vector<double>& baseline, std::vector<double>& variant) {
  baseline.resize(static_cast<size_t>(n));
  variant.resize(static_cast<size_t>(n));
  if (const auto* pm = std::get_if<ParametricModel>(&model)) {
    const double cross = std::sqrt(1.0 - pm->rho * pm->rho);
    for (int i = 0; i < n; ++i) {
      const auto [z0, z1] = normal_pair(prng);
      baseline[static_cast<size_t>(i)] = pm->mean_b + pm->sd_b * z0;
      variant[static_cast<size_t>(i)] =
          pm->mean_b + pm->mean_diff + pm->sd_v * (pm->rho * z0 + cross * z1);
    }
    return;
  }
  const auto& pairs = std::get<PilotModel>(model).pairs;
  for (int i = 0; i < n; ++i) {
    const auto& [b, v] = pairs[prng.next_below(pairs.size())];
    baseline[static_cast<size_t>(i)] = b;
    variant[static_cast<size_t>(i)] = v;
  }
}

// Search floor: resampling n of n pairs lands on a single pair with
// probability n^(1-n), which at n=4 (1/64) exceeds the bootstrap's 1%
// degeneracy budget on every call. 8 keeps that probability negligible.
constexpr int kMinSearchN = 8;

void validate_options(const PowerOptions& options) {
  if (options.target_width <= 0.0) throw ValidationError("target_width must be positive");
  if (options.level <= 0.0 || options.level >= 1.0) {
    throw ValidationError("level must be in (0,1)");
  }
  if (options.trials < 1) throw ValidationError("trials must be >= 1");
  if (options.bootstrap_reps < 1) throw ValidationError("bootstrap_reps must be >= 1");
  if (options.n_ceiling < kMinSearchN) {
    throw ValidationError("n_ceiling must be >= " + std::to_string(kMinSearchN));
  }
}

}  // namespace

void ParametricModel::validate() const {
  if (!(sd_b > 0.0) || !(sd_v > 0.0)) throw ValidationError("model sds must be positive");
  if (rho <= -1.0 || rho >= 1.0) throw ValidationError("model rho must be in (-1,1)");
}

void PilotModel::validate() const {
  if (pairs.size() < 2) throw ValidationError("pilot model needs at least 2 pairs");
}

double median_ci_width(const PowerModel& model, int n, const PowerOptions& options) {
  validate_options(options);
  std::visit([](const auto& m) { m.validate(); }, model);
  if (n < 2) throw ValidationError("candidate n must be >= 2");

  std::vector<double> widths;
  widths.reserve(static_cast<size_t>(options.trials));
  std::vector<double> baseline, variant;
  for (int t = 0; t < options.trials; ++t) {
    SeededPrng prng = SeededPrng::substream(options.seed, static_cast<uint64_t>(t));
    simulate(model, n, prng, baseline, variant);
    BootstrapOptions boot;
    boot.reps = options.bootstrap_reps;
    boot.level = options.level;
    boot.seed = derive_seed(options.seed, "power-trial-" + std::to_string(t));
    const Ci ci = bootstrap_ci(baseline, variant, options.method, boot);
    widths.push_back(ci.hi - ci.lo);
  }
  std::sort(widths.begin(), widths.end());
  return quantile_sorted(widths, 0.5);
}

int min_n_for_ci_width(const PowerModel& model, const PowerOptions& options) {
  validate_options(options);

  int lo = kMinSearchN;
  if (median_ci_width(model, lo, options) <= options.target_width) return lo;
  int hi = lo;
  while (true) {
    hi *= 2;
    if (hi > options.n_ceiling) hi = options.n_ceiling;
    if (median_ci_width(model, hi, options) <= options.target_width) break;
    if (hi == options.n_ceiling) {
      throw RuntimeFailure("target CI width " + std::to_string(options.target_width) +
                           " not reached by n=" + std::to_string(options.n_ceiling));
    }
    lo = hi;
  }
  // Invariant: width(lo) > target >= width(hi).
  while (lo + 1 < hi) {
    const int mid = lo + (hi - lo) / 2;
    if (median_ci_width(model, mid, options) <= options.target_width) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

PowerReport power_report(const PowerModel& model, const PowerOptions& options) {
  PowerReport report;
  report.target_width = options.target_width;
  report.level = options.level;
  report.method = options.method;
  report.min_n = min_n_for_ci_width(model, options);
  report.width_at_min_n = median_ci_width(model, report.min_n, options);

  PowerOptions loose = options;
  loose.target_width = options.target_width * 1.1;
  report.plausible_lo = min_n_for_ci_width(model, loose);

  PowerOptions tight = options;
  tight.target_width = options.target_width * 0.9;
  report.plausible_hi = min_n_for_ci_width(model, tight);
  return report;
}

PilotModel load_pilot_pairs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open pilot pairs '" + path + "'");
  PilotModel model;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line.empty()) continue;
    const size_t comma = line.find(',');
    if (comma == std::string::npos) {
      throw ValidationError("pilot pairs '" + path + "' line " + std::to_string(line_no) +
                            ": expected two comma-separated values");
    }
    char* end_b = nullptr;
    char* end_v = nullptr;
    const std::string left = line.substr(0, comma);
    const std::string right = line.substr(comma + 1);
    const double b = std::strtod(left.c_str(), &end_b);
    const double v = std::strtod(right.c_str(), &end_v);
    const bool parsed = end_b != left.c_str() && *end_b == '\0' &&
                        end_v != right.c_str() && *end_v == '\0';
    if (!parsed) {
      if (line_no == 1) continue;  // header
      throw ValidationError("pilot pairs '" + path + "' line " + std::to_string(line_no) +
                            ": not numeric");
    }
    model.pairs.emplace_back(b, v);
  }
  model.validate();
  return model;
}

}  // namespace scoreprobe

