#include "scoreprobe/rephrase.h"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "scoreprobe/error.h"
#include "scoreprobe/readability.h"

namespace scoreprobe {

namespace {

const std::unordered_map<std::string, std::string>& synonym_table() {
  static const std::unordered_map<std::string, std::string> table = {
      {"utilize", "use"},       {"utilizes", "uses"},
      {"approximately", "about"}, {"assistance", "help"},
      {"demonstrate", "show"},  {"demonstrates", "shows"},
      {"additional", "more"},   {"purchase", "buy"},
      {"attempt", "try"},       {"frequently", "often"},
      {"individuals", "people"}, {"communicate", "talk"},
  };
  return table;
}

bool is_conjunction(std::string_view token) {
  std::string t;
  for (char c : token) {
    if (std::isalpha(static_cast<unsigned char>(c))) {
      t += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    } else {
      return false;  // "and," is the previous clause's token, not a split point
    }
  }
  return t == "and" || t == "but" || t == "or" || t == "so" || t == "yet" || t == "nor";
}

std::vector<std::string> tokenize(const std::string& sentence) {
  std::vector<std::string> tokens;
  std::istringstream in(sentence);
  std::string tok;
  while (in >> tok) tokens.push_back(tok);
  return tokens;
}

std::string join(const std::vector<std::string>& tokens, size_t begin, size_t end) {
  std::string out;
  for (size_t i = begin; i < end; ++i) {
    if (!out.empty()) out += ' ';
    out += tokens[i];
  }
  return out;
}

// Split into sentences on the same boundary rule the readability metrics
// use, keeping the terminal punctuation with each sentence.
std::vector<std::string> split_sentences(const std::string& text) {
  std::vector<std::string> sentences;
  std::string current;
  for (size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    current += c;
    if ((c == '.' || c == '!' || c == '?') &&
        (i + 1 == text.size() || std::isspace(static_cast<unsigned char>(text[i + 1])))) {
      sentences.push_back(current);
      current.clear();
      while (i + 1 < text.size() && std::isspace(static_cast<unsigned char>(text[i + 1]))) ++i;
    }
  }
  if (current.find_first_not_of(" \t\r\n") != std::string::npos) sentences.push_back(current);
  return sentences;
}

// Turn the token before the split into a clause end: a trailing comma
// becomes a period, otherwise a period is appended. Words themselves are
// untouched.
void end_clause(std::string& token) {
  if (!token.empty() && token.back() == ',') {
    token.back() = '.';
  } else {
    token += '.';
  }
}

std::string split_long_sentences(const std::string& text, const RuleBasedOptions& options) {
  std::vector<std::string> work = split_sentences(text);
  std::vector<std::string> done;
  while (!work.empty()) {
    std::string sentence = work.front();
    work.erase(work.begin());
    std::vector<std::string> tokens = tokenize(sentence);
    if (static_cast<int>(tokens.size()) >= options.split_min_words) {
      // Prefer the conjunction closest to the middle of the sentence.
      size_t best = 0;
      bool found = false;
      for (size_t k = 1; k + 1 < tokens.size(); ++k) {
        if (!is_conjunction(tokens[k])) continue;
        if (!found || std::llabs(static_cast<long long>(2 * k) -
                                 static_cast<long long>(tokens.size())) <
                          std::llabs(static_cast<long long>(2 * best) -
                                     static_cast<long long>(tokens.size()))) {
          best = k;
          found = true;
        }
      }
      if (found) {
        std::vector<std::string> head(tokens.begin(), tokens.begin() + best);
        end_clause(head.back());
        std::vector<std::string> tail(tokens.begin() + best, tokens.end());
        done.push_back(join(head, 0, head.size()));
        // Re-examine the tail; it may still be long enough to split again.
        work.insert(work.begin(), join(tail, 0, tail.size()));
        continue;
      }
    }
    done.push_back(join(tokens, 0, tokens.size()));
  }
  std::string out;
  for (const std::string& s : done) {
    if (!out.empty()) out += ' ';
    out += s;
  }
  return out;
}

std::string join_short_sentences(const std::string& text, const RuleBasedOptions& options) {
  std::vector<std::string> sentences = split_sentences(text);
  std::vector<std::string> out;
  for (std::string& sentence : sentences) {
    if (!out.empty()) {
      int prev_words = word_count(out.back());
      int cur_words = word_count(sentence);
      if (prev_words <= options.join_max_words && cur_words <= options.join_max_words) {
        std::string& prev = out.back();
        size_t e = prev.find_last_not_of(" \t\r\n");
        if (e != std::string::npos &&
            (prev[e] == '.' || prev[e] == '!' || prev[e] == '?')) {
          prev[e] = ',';
        }
        prev += ' ';
        prev += sentence;
        continue;
      }
    }
    out.push_back(std::move(sentence));
  }
  std::string joined;
  for (const std::string& s : out) {
    if (!joined.empty()) joined += ' ';
    joined += s;
  }
  return joined;
}

std::string apply_synonyms(const std::string& text) {
  std::vector<std::string> tokens = tokenize(text);
  for (std::string& tok : tokens) {
    size_t b = 0, e = tok.size();
    while (b < e && !std::isalnum(static_cast<unsigned char>(tok[b]))) ++b;
    while (e > b && !std::isalnum(static_cast<unsigned char>(tok[e - 1]))) --e;
    std::string core = tok.substr(b, e - b);
    std::string lower = core;
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    auto it = synonym_table().find(lower);
    if (it == synonym_table().end()) continue;
    std::string repl = it->second;
    if (!core.empty() && std::isupper(static_cast<unsigned char>(core[0])) && !repl.empty()) {
      repl[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(repl[0])));
    }
    tok = tok.substr(0, b) + repl + tok.substr(e);
  }
  return join(tokens, 0, tokens.size());
}

RglDirection resolve_direction(const std::string& text, const RephraseRglSpec& spec) {
  if (spec.direction) return *spec.direction;
  if (spec.target_rgl) {
    return *spec.target_rgl < fk_grade(text) ? RglDirection::kLower : RglDirection::kHigher;
  }
  throw ValidationError("rephrase spec needs a direction or a target_rgl");
}

}  // namespace

std::string RuleBasedRephraser::rephrase(const std::string& text,
                                         const RephraseRglSpec& spec) {
  RglDirection direction = resolve_direction(text, spec);
  if (direction == RglDirection::kLower) {
    std::string out = split_long_sentences(text, options_);
    if (options_.use_synonyms) out = apply_synonyms(out);
    return out;
  }
  return join_short_sentences(text, options_);
}

void RephraserRegistry::add(std::shared_ptr<Rephraser> rephraser) {
  by_id_[rephraser->id()] = std::move(rephraser);
}

Rephraser& RephraserRegistry::get(const std::string& id) const {
  auto it = by_id_.find(id);
  if (it == by_id_.end()) {
    throw ValidationError("no rephraser registered under id '" + id + "'");
  }
  return *it->second;
}

bool RephraserRegistry::has(const std::string& id) const {
  return by_id_.find(id) != by_id_.end();
}

RephraserRegistry RephraserRegistry::with_builtins() {
  RephraserRegistry registry;
  registry.add(std::make_shared<IdentityRephraser>());
  registry.add(std::make_shared<RuleBasedRephraser>());
  return registry;
}

std::string rephrase_rgl(const std::string& text, const RephraseRglSpec& spec,
                         const RephraserRegistry& registry) {
  if (text.empty()) throw ValidationError("rephrase_rgl: empty input text");
  std::string out = registry.get(spec.rephraser_id).rephrase(text, spec);
  if (out.find_first_not_of(" \t\r\n") == std::string::npos) {
    throw RuntimeFailure("rephraser '" + spec.rephraser_id + "' returned empty text");
  }
  return out;
}

}  // namespace scoreprobe
