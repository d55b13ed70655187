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

#include "choke/curation.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>

#include "choke/error.h"

namespace choke {

SynonymLexicon SynonymLexicon::from_json(const nlohmann::json& j) {
  if (!j.is_object()) {
    throw Error(ErrorCode::kInvalidArgument,
                "synonym lexicon must be a JSON object of word -> [synonyms]");
  }
  SynonymLexicon lex;
  for (const auto& [word, syns] : j.items()) {
    if (!syns.is_array()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "synonym lexicon entry '" + word + "' must be an array");
    }
    for (const auto& s : syns) {
      if (!s.is_string()) {
        throw Error(ErrorCode::kInvalidArgument,
                    "synonym lexicon entry '" + word + "' holds a non-string");
      }
      lex.add(word, s.get<std::string>());
    }
  }
  return lex;
}

SynonymLexicon SynonymLexicon::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kMissingInput, "cannot open synonym lexicon " + path);
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kMalformedJson, path + ": " + e.what());
  }
  return from_json(j);
}

void SynonymLexicon::add(std::string_view word, std::string_view synonym) {
  entries_[normalize_text(word)].insert(normalize_text(synonym));
}

std::vector<std::string> SynonymLexicon::lookup(std::string_view word) const {
  auto it = entries_.find(normalize_text(word));
  if (it == entries_.end()) return {};
  return {it->second.begin(), it->second.end()};
}

SynonymProvider SynonymLexicon::provider() const {
  return [lex = *this](std::string_view w) { return lex.lookup(w); };
}

void check_config(const CurationConfig& cfg) {
  const Fraction& t = cfg.stem_overlap_threshold;
  if (t.den <= 0 || t.num <= 0 || t.num > t.den) {
    throw Error(ErrorCode::kInvalidArgument,
                "stem_overlap_threshold must lie in (0, 1]");
  }
  if (cfg.edit_distance_min < 0) {
    throw Error(ErrorCode::kInvalidArgument, "edit_distance_min must be >= 0");
  }
}

bool contains_gold(std::string_view generation_text,
                   const std::vector<std::string>& gold_answers) {
  const std::string text = normalize_text(generation_text);
  for (const auto& gold : gold_answers) {
    const std::string g = normalize_text(gold);
    if (!g.empty() && text.find(g) != std::string::npos) return true;
  }
  return false;
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  std::iota(prev.begin(), prev.end(), std::size_t{0});
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

namespace {

std::set<std::string> stem_set(std::string_view s, const Stemmer& stemmer) {
  std::set<std::string> out;
  for (const auto& w : split_words(s)) out.insert(stemmer(w));
  return out;
}

}  // namespace

Fraction stem_overlap(std::string_view a, std::string_view b,
                      const Stemmer& stemmer) {
  const auto sa = stem_set(a, stemmer);
  const auto sb = stem_set(b, stemmer);
  std::int64_t shared = 0;
  for (const auto& s : sa) shared += sb.count(s);
  const auto uni = static_cast<std::int64_t>(sa.size() + sb.size()) - shared;
  return {shared, std::max<std::int64_t>(1, uni)};
}

bool is_numeric_answer(std::string_view gold) {
  std::string s = normalize_text(gold);
  s.erase(std::remove(s.begin(), s.end(), ','), s.end());
  if (s.empty()) return false;
  double value = 0.0;
  const char* first = s.data();
  if (*first == '+') ++first;
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  return ec == std::errc() && ptr == last;
}

CurationDecision refine_candidate(std::string_view generation_text,
                                  std::string_view gold, const CurationConfig& cfg,
                                  const ModelFlags& flags) {
  const std::string text = normalize_text(generation_text);
  const std::string norm_gold = normalize_text(gold);

  for (const auto& prefix : cfg.negation_prefixes) {
    const std::string p = normalize_text(prefix);
    if (!p.empty() && text.starts_with(p)) {
      return CurationDecision::exclude(ExclusionReason::kNegation);
    }
  }

  if (cfg.synonym_provider) {
    for (const auto& syn : cfg.synonym_provider(norm_gold)) {
      if (contains_phrase(text, normalize_text(syn))) {
        return CurationDecision::exclude(ExclusionReason::kSynonym);
      }
    }
  }

  if (stem_overlap(text, norm_gold, cfg.stemmer) > cfg.stem_overlap_threshold) {
    return CurationDecision::exclude(ExclusionReason::kStemOverlap);
  }

  {
    const auto words = split_words(text);
    const bool has_excluded_word =
        std::any_of(words.begin(), words.end(), [&](const std::string& w) {
          return cfg.numeric_exclusion_words.count(w) > 0;
        });
    const std::size_t dist = edit_distance(stem_text(text, cfg.stemmer),
                                           stem_text(norm_gold, cfg.stemmer));
    const bool far_enough =
        dist > static_cast<std::size_t>(cfg.edit_distance_min);
    if (has_excluded_word || !(far_enough || is_numeric_answer(norm_gold))) {
      return CurationDecision::exclude(ExclusionReason::kEditDistance);
    }
  }

  {
    const auto gold_words = split_words(norm_gold);
    if (!gold_words.empty() && text == gold_words.front()) {
      return CurationDecision::exclude(ExclusionReason::kInitialWord);
    }
  }

  if (flags.star_formatting && !cfg.formatting_marker.empty() &&
      generation_text.find(cfg.formatting_marker) == std::string_view::npos) {
    return CurationDecision::exclude(ExclusionReason::kFormatting);
  }

  return CurationDecision::keep_candidate();
}

CurationDecision refine_against_all(std::string_view generation_text,
                                    const std::vector<std::string>& gold_answers,
                                    const CurationConfig& cfg,
                                    const ModelFlags& flags) {
  CurationDecision result = CurationDecision::keep_candidate();
  for (const auto& gold : gold_answers) {
    const CurationDecision d = refine_candidate(generation_text, gold, cfg, flags);
    if (d.keep()) continue;
    // ExclusionReason enumerators follow heuristic order.
    if (result.keep() || *d.excluded < *result.excluded) result = d;
  }
  return result;
}

OutcomeLabel label_outcome(const QARecord& record, const KnowledgeLabel& knowledge,
                           const CurationConfig& cfg, const ModelFlags& flags) {
  if (!knowledge.knows) return OutcomeLabel::excluded(ExclusionReason::kNoKnowledge);
  if (contains_gold(record.setting_greedy.text, record.gold_answers)) {
    return OutcomeLabel::factual();
  }
  const CurationDecision d =
      refine_against_all(record.setting_greedy.text, record.gold_answers, cfg, flags);
  if (d.keep()) return OutcomeLabel::hallucination();
  return OutcomeLabel::excluded(*d.excluded);
}

}  // namespace choke
