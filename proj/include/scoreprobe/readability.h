#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace scoreprobe {

struct TextMetrics {
  int n_words = 0;
  int n_sentences = 0;
  int n_syllables = 0;

  double words_per_sentence() const {
    return static_cast<double>(n_words) / n_sentences;
  }
  double syllables_per_word() const {
    return static_cast<double>(n_syllables) / n_words;
  }
};

// Whitespace-delimited tokens that contain at least one alphanumeric
// character. Leading/trailing punctuation is kept here and stripped by the
// syllable counter.
std::vector<std::string> words(std::string_view text);

int word_count(std::string_view text);

// Vowel-group heuristic: maximal runs of [aeiouy] (case-insensitive) in the
// punctuation-stripped word, minus one for a trailing silent 'e'
// (consonant + 'e', length > 2), floored at 1. Requires at least one
// alphabetic character.
int count_syllables(std::string_view word);

// Sentence boundaries are '.', '!' or '?' followed by whitespace or end of
// text; nonempty text counts as at least one sentence.
TextMetrics text_metrics(std::string_view text);

// Flesch-Kincaid reading grade level from the two ratios.
double fk_from_ratios(double words_per_sentence, double syllables_per_word);

double fk_grade(std::string_view text);

}  // namespace scoreprobe
