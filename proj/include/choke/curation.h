// Copyright 2026 The CHOKE Engine Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "choke/knowledge.h"
#include "choke/record.h"
#include "choke/text.h"

namespace choke {

// Exact non-negative ratio; comparisons never round.
struct Fraction {
  std::int64_t num = 0;
  std::int64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }

  friend bool operator==(const Fraction& a, const Fraction& b) {
    return a.num * b.den == b.num * a.den;
  }
  friend std::strong_ordering operator<=>(const Fraction& a, const Fraction& b) {
    return a.num * b.den <=> b.num * a.den;
  }
};

// word (or phrase) -> synonyms. Returning an empty list disables the
// heuristic for that word.
using SynonymProvider = std::function<std::vector<std::string>(std::string_view)>;

// In-memory lexicon backed by a {"word": ["syn", ...]} JSON document. Keys and
// synonyms are normalized on load.
class SynonymLexicon {
 public:
  SynonymLexicon() = default;
  static SynonymLexicon from_json_file(const std::string& path);
  static SynonymLexicon from_json(const nlohmann::json& j);

  void add(std::string_view word, std::string_view synonym);
  std::vector<std::string> lookup(std::string_view word) const;
  std::size_t size() const { return entries_.size(); }

  SynonymProvider provider() const;

 private:
  std::map<std::string, std::set<std::string>> entries_;
};

struct CurationConfig {
  std::vector<std::string> negation_prefixes = {"the answer is not"};
  SynonymProvider synonym_provider;  // empty: heuristic disabled
  Fraction stem_overlap_threshold{1, 2};
  int edit_distance_min = 2;  // keep when distance > edit_distance_min
  std::set<std::string> numeric_exclusion_words = {"great", "none", "n/a"};
  std::string formatting_marker = "**";
  Stemmer stemmer = porter_stem;
};

// Throws Error(kInvalidArgument) unless 0 < stem_overlap_threshold <= 1 and
// edit_distance_min >= 0.
void check_config(const CurationConfig& cfg);

struct ModelFlags {
  // Model habitually wraps its final answer in cfg.formatting_marker.
  bool star_formatting = false;
};

// Curation verdict for one candidate hallucination.
struct CurationDecision {
  std::optional<ExclusionReason> excluded;  // nullopt: keep

  bool keep() const { return !excluded.has_value(); }
  static CurationDecision keep_candidate() { return {}; }
  static CurationDecision exclude(ExclusionReason r) { return {r}; }

  bool operator==(const CurationDecision&) const = default;
};

// True iff some normalized gold answer is a substring of the normalized text.
// Empty gold answers never match.
bool contains_gold(std::string_view generation_text,
                   const std::vector<std::string>& gold_answers);

// Levenshtein distance with unit costs, over bytes.
std::size_t edit_distance(std::string_view a, std::string_view b);

// |stems(a) ∩ stems(b)| / max(1, |stems(a) ∪ stems(b)|) over whitespace words
// of the normalized strings, with set semantics.
Fraction stem_overlap(std::string_view a, std::string_view b,
                      const Stemmer& stemmer = porter_stem);

// Gold parses fully as a number once commas are stripped.
bool is_numeric_answer(std::string_view gold);

// Applies the six refinement heuristics in order and reports the first one
// that fires:
//   1 negation      normalized text starts with a negation prefix
//   2 synonym       a synonym of the gold answer occurs in the text
//   3 stem_overlap  stem_overlap(text, gold) > threshold
//   4 edit_distance stemmed distance <= edit_distance_min and gold is not
//                   numeric, or the text contains a numeric exclusion word
//   5 initial_word  normalized text equals the gold's first word
//   6 formatting    star-formatting model and the marker is absent
CurationDecision refine_candidate(std::string_view generation_text,
                                  std::string_view gold, const CurationConfig& cfg,
                                  const ModelFlags& flags = {});

// refine_candidate against every gold answer; the candidate survives only if
// all golds keep it. The reported reason is the earliest heuristic that fired
// for any gold.
CurationDecision refine_against_all(std::string_view generation_text,
                                    const std::vector<std::string>& gold_answers,
                                    const CurationConfig& cfg,
                                    const ModelFlags& flags = {});

OutcomeLabel label_outcome(const QARecord& record, const KnowledgeLabel& knowledge,
                           const CurationConfig& cfg, const ModelFlags& flags = {});

}  // namespace choke
