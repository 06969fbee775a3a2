#include "scoreprobe/perturb.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "scoreprobe/error.h"
#include "scoreprobe/prng.h"

namespace scoreprobe {

namespace {

constexpr char kLetters[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz";
constexpr uint64_t kNumLetters = 52;

std::string format_prob(double p) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", p);
  return buf;
}

bool ends_with_terminal_punct(std::string_view s) {
  size_t e = s.size();
  while (e > 0 && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  if (e == 0) return false;
  char c = s[e - 1];
  return c == '.' || c == '!' || c == '?';
}

std::string replace_placeholder(std::string templ, std::string_view placeholder,
                                std::string_view value) {
  size_t pos = 0;
  while ((pos = templ.find(placeholder, pos)) != std::string::npos) {
    templ.replace(pos, placeholder.size(), value);
    pos += value.size();
  }
  return templ;
}

}  // namespace

void EditDistribution::validate() const {
  if (p_sub < 0 || p_del < 0 || p_ins < 0) {
    throw ValidationError("edit distribution probabilities must be nonnegative");
  }
  if (std::abs(p_sub + p_del + p_ins - 1.0) > 1e-12) {
    throw ValidationError("edit distribution probabilities must sum to 1");
  }
}

std::string spec_label(const PerturbationSpec& spec) {
  struct Visitor {
    std::string operator()(const AppendSpec& s) const {
      switch (s.kind) {
        case AppendKind::kDuplicate:
          return "duplicate";
        case AppendKind::kCompetencyStatement:
          return "append_competency(template=" + s.competency_template + ")";
        case AppendKind::kScenarioRephrase:
          return "append_scenario";
        case AppendKind::kFormulaic:
          return "append_formulaic(sentence=" + s.sentence + ")";
      }
      return "append_unknown";
    }
    std::string operator()(const SpellingNoiseSpec& s) const {
      return "spelling_noise(cer=" + format_prob(s.cer) + ",sub=" + format_prob(s.dist.p_sub) +
             ",del=" + format_prob(s.dist.p_del) + ",ins=" + format_prob(s.dist.p_ins) +
             ",seed=" + std::to_string(s.seed) + ")";
    }
    std::string operator()(const RephraseRglSpec& s) const {
      std::string goal;
      if (s.direction) {
        goal = *s.direction == RglDirection::kLower ? "lower" : "higher";
      } else if (s.target_rgl) {
        goal = "target=" + format_prob(*s.target_rgl);
      } else {
        goal = "unspecified";
      }
      return "rephrase_rgl(" + goal + ",rephraser=" + s.rephraser_id + ")";
    }
    std::string operator()(const CrossItemSpec& s) const {
      return std::string("cross_item(") +
             (s.mode == PermutationMode::kSameCompetency ? "same_competency"
                                                         : "different_competency") +
             ",seed=" + std::to_string(s.seed) + ")";
    }
  };
  return std::visit(Visitor{}, spec);
}

std::string make_variant_id(const std::string& source_response_id,
                            const PerturbationSpec& spec) {
  return source_response_id + "#" + spec_label(spec);
}

VariantRecord append_variant(const Response& response, const Item& item,
                             const AppendSpec& spec) {
  if (response.text.empty()) {
    throw ValidationError("append_variant: response '" + response.response_id +
                          "' has empty text");
  }

  std::string suffix;
  switch (spec.kind) {
    case AppendKind::kDuplicate:
      suffix = response.text;
      break;
    case AppendKind::kCompetencyStatement:
      if (item.competency.empty()) {
        throw ValidationError("append_variant: item '" + item.item_id +
                              "' has empty competency");
      }
      suffix = replace_placeholder(spec.competency_template, "{competency}", item.competency);
      break;
    case AppendKind::kScenarioRephrase:
      if (item.scenario_summary.empty()) {
        throw ValidationError("append_variant: item '" + item.item_id +
                              "' has no scenario_summary");
      }
      suffix = item.scenario_summary;
      break;
    case AppendKind::kFormulaic:
      suffix = spec.sentence;
      break;
  }

  std::string text = response.text;
  if (!ends_with_terminal_punct(text)) text += ".";
  text += " ";
  text += suffix;

  VariantRecord rec;
  rec.variant_id = make_variant_id(response.response_id, spec);
  rec.source_response_id = response.response_id;
  rec.assigned_item_id = response.item_id;
  rec.label = spec_label(spec);
  rec.text = std::move(text);
  return rec;
}

NoiseResult inject_spelling_noise_counted(std::string_view text, double cer,
                                          const EditDistribution& dist, uint64_t seed) {
  if (!(cer >= 0.0 && cer <= 1.0)) {
    throw ValidationError("cer must be in [0, 1]");
  }
  dist.validate();

  SeededPrng prng(seed);
  NoiseResult out;
  out.text.reserve(text.size() + text.size() / 8);
  for (char c : text) {
    if (prng.next_double() < cer) {
      ++out.n_edited_positions;
      double t = prng.next_double();
      if (t < dist.p_sub) {
        out.text += kLetters[prng.next_below(kNumLetters)];
        ++out.n_sub;
      } else if (t < dist.p_sub + dist.p_del) {
        ++out.n_del;  // character dropped
      } else {
        out.text += kLetters[prng.next_below(kNumLetters)];
        out.text += c;
        ++out.n_ins;
      }
    } else {
      out.text += c;
    }
  }
  return out;
}

std::string inject_spelling_noise(std::string_view text, double cer,
                                  const EditDistribution& dist, uint64_t seed) {
  return inject_spelling_noise_counted(text, cer, dist, seed).text;
}

std::vector<std::string> inject_spelling_noise_coupled(
    std::string_view text, const std::vector<double>& cers,
    const EditDistribution& dist, uint64_t seed) {
  for (double cer : cers) {
    if (!(cer >= 0.0 && cer <= 1.0)) throw ValidationError("cer must be in [0, 1]");
  }
  dist.validate();

  // One draw triple per position, consumed at every level. A position edited
  // at level cer1 is edited the same way at every level cer2 >= cer1.
  SeededPrng prng(seed);
  std::vector<std::string> outs(cers.size());
  for (auto& s : outs) s.reserve(text.size() + text.size() / 8);
  for (char c : text) {
    const double u_select = prng.next_double();
    const double u_type = prng.next_double();
    const char letter = kLetters[prng.next_below(kNumLetters)];
    for (size_t level = 0; level < cers.size(); ++level) {
      std::string& out = outs[level];
      if (u_select < cers[level]) {
        if (u_type < dist.p_sub) {
          out += letter;
        } else if (u_type < dist.p_sub + dist.p_del) {
          // dropped
        } else {
          out += letter;
          out += c;
        }
      } else {
        out += c;
      }
    }
  }
  return outs;
}

namespace {

struct Slot {
  std::string item_id;
  std::string competency;
};

// Positions are responses in response_id order; slots start as each
// position's original item and get shuffled + repaired.
std::unordered_map<std::string, std::string> permute_group(
    const std::vector<std::string>& response_ids, const std::vector<Slot>& original,
    bool forbid_same_item, SeededPrng& prng) {
  const size_t n = response_ids.size();
  std::vector<size_t> perm(n);
  for (size_t i = 0; i < n; ++i) perm[i] = i;

  auto allowed = [&](size_t pos, size_t slot) {
    if (forbid_same_item) return original[slot].item_id != original[pos].item_id;
    return original[slot].competency != original[pos].competency;
  };

  // Fisher-Yates shuffle of the slots.
  for (size_t j = 0; j + 1 < n; ++j) {
    size_t k = j + prng.next_below(n - j);
    std::swap(perm[j], perm[k]);
  }

  // Repair pass. Under the feasibility precheck a swap partner always
  // exists for a violating position, and each swap strictly reduces the
  // number of violations, so this terminates within n swaps.
  for (size_t i = 0; i < n; ++i) {
    if (allowed(i, perm[i])) continue;
    std::vector<size_t> partners;
    for (size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      if (allowed(i, perm[j]) && allowed(j, perm[i])) partners.push_back(j);
    }
    if (partners.empty()) {
      throw RuntimeFailure("cross_item_permutation: no repair partner found");
    }
    size_t j = partners[prng.next_below(partners.size())];
    std::swap(perm[i], perm[j]);
  }

  std::unordered_map<std::string, std::string> assignment;
  for (size_t i = 0; i < n; ++i) {
    assignment[response_ids[i]] = original[perm[i]].item_id;
  }
  return assignment;
}

}  // namespace

std::unordered_map<std::string, std::string> cross_item_permutation(
    const std::vector<std::pair<std::string, std::string>>& response_items,
    const std::unordered_map<std::string, std::string>& item_competency,
    PermutationMode mode, uint64_t seed) {
  std::vector<std::pair<std::string, std::string>> sorted = response_items;
  std::sort(sorted.begin(), sorted.end());
  for (size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i].first == sorted[i - 1].first) {
      throw ValidationError("cross_item_permutation: duplicate response_id '" +
                            sorted[i].first + "'");
    }
  }

  auto competency_of = [&](const std::string& item_id) -> const std::string& {
    auto it = item_competency.find(item_id);
    if (it == item_competency.end()) {
      throw ValidationError("cross_item_permutation: unknown item '" + item_id + "'");
    }
    return it->second;
  };

  SeededPrng prng(seed);
  std::unordered_map<std::string, std::string> result;

  if (mode == PermutationMode::kSameCompetency) {
    // Independent derangement of item slots inside each competency group.
    std::map<std::string, std::pair<std::vector<std::string>, std::vector<Slot>>> groups;
    for (const auto& [rid, iid] : sorted) {
      auto& g = groups[competency_of(iid)];
      g.first.push_back(rid);
      g.second.push_back({iid, competency_of(iid)});
    }
    for (const auto& [competency, g] : groups) {
      // Hall condition for a multiset derangement: no item may hold more
      // than half of the group's slots.
      std::map<std::string, size_t> load;
      for (const Slot& s : g.second) ++load[s.item_id];
      for (const auto& [iid, count] : load) {
        if (2 * count > g.second.size()) {
          throw ValidationError(
              "cross_item_permutation: same-competency mode infeasible for competency '" +
              competency + "': item '" + iid + "' holds " + std::to_string(count) + " of " +
              std::to_string(g.second.size()) + " responses");
        }
      }
    }
    for (auto& [competency, g] : groups) {
      auto part = permute_group(g.first, g.second, /*forbid_same_item=*/true, prng);
      result.insert(part.begin(), part.end());
    }
  } else {
    std::vector<std::string> rids;
    std::vector<Slot> slots;
    std::map<std::string, size_t> comp_load;
    for (const auto& [rid, iid] : sorted) {
      rids.push_back(rid);
      slots.push_back({iid, competency_of(iid)});
      ++comp_load[competency_of(iid)];
    }
    for (const auto& [competency, count] : comp_load) {
      if (2 * count > slots.size()) {
        throw ValidationError(
            "cross_item_permutation: different-competency mode infeasible: competency '" +
            competency + "' holds " + std::to_string(count) + " of " +
            std::to_string(slots.size()) + " responses");
      }
    }
    result = permute_group(rids, slots, /*forbid_same_item=*/false, prng);
  }
  return result;
}

}  // namespace scoreprobe
