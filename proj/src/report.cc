#include "scoreprobe/report.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "scoreprobe/error.h"

namespace scoreprobe {

namespace {

constexpr char kTableHeader[] =
    "variant,mean_word_count,mean_score,sd,d,ci_low,ci_high,floor_rate";

std::string ci_text(const Ci& ci) {
  return "(" + format_fixed(ci.lo, 2) + ", " + format_fixed(ci.hi, 2) + ")";
}

}  // namespace

std::string csv_field(const std::string& value) {
  const bool needs_quoting =
      value.find_first_of(",\"\r\n") != std::string::npos;
  if (!needs_quoting) return value;
  std::string out = "\"";
  for (char c : value) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out += "\"";
  return out;
}

std::string format_fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
  // Avoid the two spellings of zero ("-0.00" vs "0.00") leaking rounding
  // noise into byte-stability checks.
  std::string out = buf;
  if (out.find_first_not_of("-0.") == std::string::npos && out[0] == '-') {
    out.erase(0, 1);
  }
  return out;
}

std::string render_table_csv(const std::vector<ReportRow>& rows) {
  std::ostringstream out;
  out << kTableHeader << "\n";
  for (const ReportRow& row : rows) {
    out << csv_field(row.variant) << ',';
    if (row.mean_word_count.has_value()) out << format_fixed(*row.mean_word_count, 1);
    out << ',' << format_fixed(row.mean_score, 4) << ',' << format_fixed(row.sd, 4) << ',';
    if (row.d.has_value()) out << format_fixed(*row.d, 4);
    out << ',';
    if (row.ci.has_value()) out << format_fixed(row.ci->lo, 4);
    out << ',';
    if (row.ci.has_value()) out << format_fixed(row.ci->hi, 4);
    out << ',';
    if (row.floor_rate.has_value()) out << format_fixed(*row.floor_rate, 4);
    out << "\n";
  }
  return out.str();
}

std::string render_table_markdown(const std::string& title,
                                  const std::vector<ReportRow>& rows) {
  std::ostringstream out;
  out << "## " << title << "\n\n";
  out << "| variant | mean word count | mean score | sd | d | 95% CI | floor rate |\n";
  out << "|---|---|---|---|---|---|---|\n";
  for (const ReportRow& row : rows) {
    out << "| " << row.variant << " | "
        << (row.mean_word_count.has_value() ? format_fixed(*row.mean_word_count, 1)
                                            : std::string("---"))
        << " | " << format_fixed(row.mean_score, 2) << " | " << format_fixed(row.sd, 2)
        << " | " << (row.d.has_value() ? format_fixed(*row.d, 2) : std::string("---"))
        << " | " << (row.ci.has_value() ? ci_text(*row.ci) : std::string("---")) << " | "
        << (row.floor_rate.has_value()
                ? format_fixed(*row.floor_rate * 100.0, 1) + "%"
                : std::string("---"))
        << " |\n";
  }
  return out.str();
}

std::string render_figure_csv(const std::vector<FigurePoint>& points) {
  std::ostringstream out;
  out << "cer,mean_score,ci_low,ci_high\n";
  for (const FigurePoint& p : points) {
    out << format_fixed(p.cer, 2) << ',' << format_fixed(p.mean_score, 4) << ','
        << format_fixed(p.ci_low, 4) << ',' << format_fixed(p.ci_high, 4) << "\n";
  }
  return out.str();
}

std::string render_readability_csv(const std::vector<ReadabilityRow>& rows) {
  std::ostringstream out;
  out << "variant,mean_rgl,mean_words,mean_sentences,mean_wps,mean_spw\n";
  for (const ReadabilityRow& row : rows) {
    out << csv_field(row.variant) << ',' << format_fixed(row.mean_rgl, 2) << ','
        << format_fixed(row.mean_words, 1) << ',' << format_fixed(row.mean_sentences, 1)
        << ',' << format_fixed(row.mean_wps, 2) << ',' << format_fixed(row.mean_spw, 2)
        << "\n";
  }
  return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  std::error_code ec;
  if (p.has_parent_path()) {
    std::filesystem::create_directories(p.parent_path(), ec);
    if (ec) {
      throw RuntimeFailure("cannot create directory '" + p.parent_path().string() +
                           "': " + ec.message());
    }
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw RuntimeFailure("cannot open '" + path + "' for writing");
  out << content;
  out.flush();
  if (!out) throw RuntimeFailure("write to '" + path + "' failed");
}

}  // namespace scoreprobe
