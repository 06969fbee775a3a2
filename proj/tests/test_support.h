#ifndef SCOREPROBE_TESTS_TEST_SUPPORT_H_
#define SCOREPROBE_TESTS_TEST_SUPPORT_H_

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <filesystem>

#include "json.hpp"
#include "scoreprobe/corpus.h"
#include "scoreprobe/prng.h"

namespace test_support {

// Scratch directory removed on destruction. Each test gets its own so
// parallel ctest runs cannot collide.
class TempDir {
 public:
  TempDir() {
    auto pattern = std::filesystem::temp_directory_path() / "scoreprobe_XXXXXX";
    std::string buf = pattern.string();
    if (::mkdtemp(buf.data()) == nullptr) {
      throw std::runtime_error("mkdtemp failed for " + buf);
    }
    path_ = buf;
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path file(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Four competencies with six disjoint keywords each. Weights are exact
// binary fractions so keyword sums never round past 1.
inline std::map<std::string, std::map<std::string, double>> synthetic_keywords() {
  auto weights = [](std::initializer_list<const char*> words) {
    std::map<std::string, double> table;
    double w[] = {0.25, 0.25, 0.125, 0.125, 0.125, 0.125};
    int i = 0;
    for (const char* word : words) table[word] = w[i++];
    return table;
  };
  return {
      {"teamwork", weights({"listen", "empathy", "respect", "calm", "support", "honest"})},
      {"planning", weights({"schedule", "prioritize", "delegate", "plan", "organize", "review"})},
      {"analysis", weights({"evidence", "analyze", "verify", "measure", "compare", "test"})},
      {"communication", weights({"collaborate", "share", "align", "inform", "coordinate", "assist"})},
  };
}

// Keywords in the order their prefix is granted to responses: the first k of
// these appear in a response with keyword count k, scoring
// 1 + 4 * (prefix weight sum) = {1, 2, 3, 3.5, 4, 4.5, 5}.
inline const std::vector<std::string>& keyword_order(const std::string& competency) {
  static const std::map<std::string, std::vector<std::string>> order = {
      {"teamwork", {"listen", "empathy", "respect", "calm", "support", "honest"}},
      {"planning", {"schedule", "prioritize", "delegate", "plan", "organize", "review"}},
      {"analysis", {"evidence", "analyze", "verify", "measure", "compare", "test"}},
      {"communication", {"collaborate", "share", "align", "inform", "coordinate", "assist"}},
  };
  return order.at(competency);
}

inline std::string synthetic_competency(int item_index) {
  static const char* names[] = {"teamwork", "planning", "analysis", "communication"};
  return names[(item_index / 3) % 4];
}

// 12 items across 4 competencies, n responses cycling over items, response i
// holding the first i % 7 keywords of its item's competency. Deterministic
// and scored exactly by the keyword scorer.
inline std::string synthetic_corpus_jsonl(int n_responses = 100) {
  std::ostringstream out;
  for (int j = 0; j < 12; ++j) {
    nlohmann::json item = {
        {"kind", "item"},
        {"item_id", "item-" + std::to_string(j)},
        {"competency", synthetic_competency(j)},
        {"scenario_text", "Scenario " + std::to_string(j) +
                              ": a coworker disagrees with your approach during a busy shift."},
        {"question_text", "What would you do in situation " + std::to_string(j) + "?"},
        {"format", "text"},
        {"scenario_summary",
         "a disagreement with a coworker during shift " + std::to_string(j)},
    };
    out << item.dump() << "\n";
  }
  for (int i = 0; i < n_responses; ++i) {
    int j = i % 12;
    std::string competency = synthetic_competency(j);
    const auto& order = keyword_order(competency);
    int k = i % 7;
    std::ostringstream text;
    text << "I would stay professional";
    for (int w = 0; w < k; ++w) text << " and " << order[w];
    text << " in that moment.";
    if (i % 2 == 1) {
      text << " I think the situation needs patience, and I would act with care"
              " every single day going forward.";
    }
    for (int f = 0; f < i % 3; ++f) text << " This matters a lot to me.";
    std::string id = std::to_string(i);
    if (id.size() < 3) id.insert(0, 3 - id.size(), '0');
    nlohmann::json resp = {
        {"kind", "response"},
        {"response_id", "resp-" + id},
        {"item_id", "item-" + std::to_string(j)},
        {"student_id", "stu-" + std::to_string(i % 37)},
        {"text", text.str()},
    };
    out << resp.dump() << "\n";
  }
  return out.str();
}

inline scoreprobe::Corpus load_synthetic_corpus(const TempDir& dir, int n_responses = 100) {
  auto path = dir.file("corpus.jsonl");
  write_file(path, synthetic_corpus_jsonl(n_responses));
  return scoreprobe::load_corpus(path.string());
}

// Deterministic standard normal draws for statistical fixtures.
inline std::vector<double> normal_draws(std::uint64_t seed, int n) {
  scoreprobe::SeededPrng prng(seed);
  std::vector<double> out;
  out.reserve(n);
  while (static_cast<int>(out.size()) < n) {
    double u1 = prng.next_double();
    double u2 = prng.next_double();
    if (u1 <= 0.0) continue;
    double r = std::sqrt(-2.0 * std::log(u1));
    out.push_back(r * std::cos(6.283185307179586 * u2));
    if (static_cast<int>(out.size()) < n) out.push_back(r * std::sin(6.283185307179586 * u2));
  }
  return out;
}

}  // namespace test_support

#endif  // SCOREPROBE_TESTS_TEST_SUPPORT_H_
