#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "scoreprobe/corpus.h"

namespace scoreprobe {

// Share of each edit type among edited positions.
struct EditDistribution {
  double p_sub = 0.40;
  double p_del = 0.30;
  double p_ins = 0.30;

  void validate() const;  // nonnegative, sums to 1 within 1e-12
};

enum class AppendKind { kDuplicate, kCompetencyStatement, kScenarioRephrase, kFormulaic };

inline constexpr const char* kDefaultCompetencyTemplate =
    "This question is designed to assess {competency}.";
inline constexpr const char* kDefaultFormulaicSentence =
    "I would approach the situation in a respectful, non-confrontational, and "
    "non-judgmental manner.";

struct AppendSpec {
  AppendKind kind = AppendKind::kDuplicate;
  std::string competency_template = kDefaultCompetencyTemplate;
  std::string sentence = kDefaultFormulaicSentence;
};

struct SpellingNoiseSpec {
  double cer = 0.0;
  EditDistribution dist;
  uint64_t seed = 0;
};

enum class RglDirection { kLower, kHigher };

struct RephraseRglSpec {
  std::optional<RglDirection> direction;
  std::optional<double> target_rgl;
  std::string rephraser_id = "rulebased";
};

enum class PermutationMode { kSameCompetency, kDifferentCompetency };

struct CrossItemSpec {
  PermutationMode mode = PermutationMode::kDifferentCompetency;
  uint64_t seed = 0;
};

using PerturbationSpec =
    std::variant<AppendSpec, SpellingNoiseSpec, RephraseRglSpec, CrossItemSpec>;

// Canonical text form of a spec; encodes every parameter, so distinct specs
// map to distinct labels.
std::string spec_label(const PerturbationSpec& spec);

// variant_id is a pure function of (source response, spec).
std::string make_variant_id(const std::string& source_response_id,
                            const PerturbationSpec& spec);

struct VariantRecord {
  std::string variant_id;
  std::string source_response_id;
  // Differs from the source response's item only for cross-item permutations.
  std::string assigned_item_id;
  std::string label;
  std::string text;
};

// text = original + separator + suffix. The original is first given terminal
// punctuation ('.' appended when the last non-space character is not one of
// .!?), then a single space, then the suffix. The raw original text always
// survives as an exact prefix.
VariantRecord append_variant(const Response& response, const Item& item,
                             const AppendSpec& spec);

struct NoiseResult {
  std::string text;
  int n_edited_positions = 0;
  int n_sub = 0;
  int n_del = 0;
  int n_ins = 0;
};

// Character-level noise. Each input position is independently edited with
// probability cer; selected positions receive a substitution, deletion, or
// insertion per the distribution. Replacement characters are uniform over
// the 52 ASCII letters; an insertion lands immediately before the position.
// Positions are scanned left to right over the original string and written
// to a fresh buffer, so earlier edits never shift later positions.
NoiseResult inject_spelling_noise_counted(std::string_view text, double cer,
                                          const EditDistribution& dist, uint64_t seed);

std::string inject_spelling_noise(std::string_view text, double cer,
                                  const EditDistribution& dist, uint64_t seed);

// Coupled variant for CER sweeps: one (selection, type, letter) draw per
// position shared by every level, so the edit sets are nested as cer grows.
std::vector<std::string> inject_spelling_noise_coupled(
    std::string_view text, const std::vector<double>& cers,
    const EditDistribution& dist, uint64_t seed);

// Reassigns every response to a different item (a derangement over the
// multiset of item slots) subject to the mode's competency constraint:
// same_competency keeps each response inside its competency, and
// different_competency forces a competency change. Infeasible inputs
// (detected exactly via the per-value Hall condition) raise a
// ValidationError naming the offending group.
std::unordered_map<std::string, std::string> cross_item_permutation(
    const std::vector<std::pair<std::string, std::string>>& response_items,
    const std::unordered_map<std::string, std::string>& item_competency,
    PermutationMode mode, uint64_t seed);

}  // namespace scoreprobe
