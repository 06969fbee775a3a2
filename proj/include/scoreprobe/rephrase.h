#pragma once

#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "scoreprobe/perturb.h"

namespace scoreprobe {

// Pluggable text rephraser. Implementations must be safe for concurrent
// calls; the harness only records the measured reading level before and
// after, it never enforces that a target was reached.
class Rephraser {
 public:
  virtual ~Rephraser() = default;
  virtual std::string id() const = 0;
  virtual std::string rephrase(const std::string& text, const RephraseRglSpec& spec) = 0;
};

// Returns the input unchanged.
class IdentityRephraser : public Rephraser {
 public:
  std::string id() const override { return "identity"; }
  std::string rephrase(const std::string& text, const RephraseRglSpec&) override {
    return text;
  }
};

struct RuleBasedOptions {
  // Sentences with at least this many words are split at a coordinating
  // conjunction when lowering the grade level.
  int split_min_words = 12;
  // Adjacent sentences at most this long are joined when raising it.
  int join_max_words = 8;
  // Swap a few polysyllabic words for short synonyms (changes the word
  // multiset; off by default).
  bool use_synonyms = false;
};

// Deterministic offline stub. Lowering splits long sentences at
// coordinating conjunctions; raising joins adjacent short sentences. With
// synonyms disabled only sentence punctuation changes, so the word multiset
// (after punctuation stripping) is preserved exactly.
class RuleBasedRephraser : public Rephraser {
 public:
  explicit RuleBasedRephraser(RuleBasedOptions options = {}) : options_(options) {}
  std::string id() const override { return "rulebased"; }
  std::string rephrase(const std::string& text, const RephraseRglSpec& spec) override;

 private:
  RuleBasedOptions options_;
};

class RephraserRegistry {
 public:
  void add(std::shared_ptr<Rephraser> rephraser);
  Rephraser& get(const std::string& id) const;  // throws when unregistered
  bool has(const std::string& id) const;

  // identity + rulebased.
  static RephraserRegistry with_builtins();

 private:
  std::unordered_map<std::string, std::shared_ptr<Rephraser>> by_id_;
};

// Looks up spec.rephraser_id and applies it; rejects empty output.
std::string rephrase_rgl(const std::string& text, const RephraseRglSpec& spec,
                         const RephraserRegistry& registry);

}  // namespace scoreprobe
