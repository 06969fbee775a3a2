#pragma once

#include <optional>
#include <string>
#include <vector>

#include "scoreprobe/stats.h"

namespace scoreprobe {

// One table row. The baseline row leaves d and ci unset; rows built from
// summary statistics alone may also lack word counts and floor rates.
struct ReportRow {
  std::string variant;
  std::optional<double> mean_word_count;
  double mean_score = 0.0;
  double sd = 0.0;
  std::optional<double> d;
  std::optional<Ci> ci;
  std::optional<double> floor_rate;
};

struct FigurePoint {
  double cer = 0.0;  // 0 for the baseline point
  double mean_score = 0.0;
  double ci_low = 0.0;   // normal-approximation CI of the mean
  double ci_high = 0.0;
};

struct ReadabilityRow {
  std::string variant;
  double mean_rgl = 0.0;
  double mean_words = 0.0;
  double mean_sentences = 0.0;
  double mean_wps = 0.0;
  double mean_spw = 0.0;
};

// RFC-4180: quote when the field contains a comma, quote, CR, or LF;
// embedded quotes are doubled.
std::string csv_field(const std::string& value);

// Fixed-precision, locale-independent.
std::string format_fixed(double value, int decimals);

std::string render_table_csv(const std::vector<ReportRow>& rows);
std::string render_table_markdown(const std::string& title,
                                  const std::vector<ReportRow>& rows);
std::string render_figure_csv(const std::vector<FigurePoint>& points);
std::string render_readability_csv(const std::vector<ReadabilityRow>& rows);

// Creates parent directories; throws RuntimeFailure when the write fails.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace scoreprobe
