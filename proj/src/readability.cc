#include "scoreprobe/readability.h"

#include <cctype>

#include "scoreprobe/error.h"

namespace scoreprobe {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }
bool is_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }

bool is_vowel(char c) {
  switch (std::tolower(static_cast<unsigned char>(c))) {
    case 'a':
    case 'e':
    case 'i':
    case 'o':
    case 'u':
    case 'y':
      return true;
    default:
      return false;
  }
}

// Strip leading/trailing non-alphanumeric characters.
std::string_view strip_punct(std::string_view token) {
  size_t b = 0;
  size_t e = token.size();
  while (b < e && !is_alnum(token[b])) ++b;
  while (e > b && !is_alnum(token[e - 1])) --e;
  return token.substr(b, e - b);
}

}  // namespace

std::vector<std::string> words(std::string_view text) {
  std::vector<std::string> out;
  size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    size_t start = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    if (i > start) {
      std::string_view tok = text.substr(start, i - start);
      bool has_alnum = false;
      for (char c : tok) {
        if (is_alnum(c)) {
          has_alnum = true;
          break;
        }
      }
      if (has_alnum) out.emplace_back(tok);
    }
  }
  return out;
}

int word_count(std::string_view text) { return static_cast<int>(words(text).size()); }

int count_syllables(std::string_view word) {
  std::string_view core = strip_punct(word);
  bool has_alpha = false;
  for (char c : core) {
    if (is_alpha(c)) {
      has_alpha = true;
      break;
    }
  }
  if (!has_alpha) {
    throw ValidationError("count_syllables: word has no alphabetic characters: '" +
                          std::string(word) + "'");
  }

  int groups = 0;
  bool in_group = false;
  for (char c : core) {
    if (is_vowel(c)) {
      if (!in_group) ++groups;
      in_group = true;
    } else {
      in_group = false;
    }
  }

  // Trailing silent 'e': consonant + 'e' at the end of a word longer than 2.
  size_t n = core.size();
  if (n > 2 && std::tolower(static_cast<unsigned char>(core[n - 1])) == 'e' &&
      is_alpha(core[n - 2]) && !is_vowel(core[n - 2])) {
    --groups;
  }
  return groups < 1 ? 1 : groups;
}

TextMetrics text_metrics(std::string_view text) {
  bool all_space = true;
  for (char c : text) {
    if (!is_space(c)) {
      all_space = false;
      break;
    }
  }
  if (text.empty() || all_space) {
    throw ValidationError("text_metrics: empty or whitespace-only text");
  }

  TextMetrics m;
  for (const std::string& w : words(text)) {
    ++m.n_words;
    std::string_view core = strip_punct(w);
    bool has_alpha = false;
    for (char c : core) {
      if (is_alpha(c)) {
        has_alpha = true;
        break;
      }
    }
    // Numeric-only tokens count as one syllable.
    m.n_syllables += has_alpha ? count_syllables(core) : 1;
  }
  if (m.n_words == 0) {
    throw ValidationError("text_metrics: no countable words in text");
  }

  for (size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c == '.' || c == '!' || c == '?') {
      if (i + 1 == text.size() || is_space(text[i + 1])) ++m.n_sentences;
    }
  }
  if (m.n_sentences == 0) m.n_sentences = 1;
  return m;
}

double fk_from_ratios(double words_per_sentence, double syllables_per_word) {
  return 0.39 * words_per_sentence + 11.8 * syllables_per_word - 15.59;
}

double fk_grade(std::string_view text) {
  TextMetrics m = text_metrics(text);
  return fk_from_ratios(m.words_per_sentence(), m.syllables_per_word());
}

}  // namespace scoreprobe
