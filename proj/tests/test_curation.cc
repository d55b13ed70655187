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

#include <random>
#include <string>
#include <vector>

#include "choke/curation.h"
#include "choke/error.h"
#include "doctest.h"
#include "fixtures.h"
#include "oracles.h"

using namespace choke;

namespace {

CurationConfig with_lexicon() {
  SynonymLexicon lex;
  lex.add("car", "automobile");
  CurationConfig cfg;
  cfg.synonym_provider = lex.provider();
  return cfg;
}

std::optional<ExclusionReason> reason(std::string_view text, std::string_view gold,
                                      const CurationConfig& cfg = {},
                                      ModelFlags flags = {}) {
  return refine_candidate(text, gold, cfg, flags).excluded;
}

}  // namespace

TEST_CASE("contains_gold") {
  CHECK(contains_gold("The answer is Paris, France", {"Paris"}));
  CHECK_FALSE(contains_gold("The answer is London", {"Paris"}));
  CHECK_FALSE(contains_gold("", {"Paris"}));
  CHECK(contains_gold("THE ANSWER IS   new york", {"Boston", "New York"}));
  CHECK_FALSE(contains_gold("anything", {""}));
}

TEST_CASE("edit_distance") {
  CHECK(edit_distance("kitten", "sitting") == 3);
  CHECK(edit_distance("paris", "paris") == 0);
  CHECK(edit_distance("", "abc") == 3);
  CHECK(edit_distance("abc", "") == 3);
}

TEST_CASE("edit_distance agrees with a recursive reference") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 400; ++trial) {
    auto word = [&] {
      std::string s;
      const int n = static_cast<int>(rng() % 9);
      for (int i = 0; i < n; ++i) s += static_cast<char>('a' + rng() % 4);
      return s;
    };
    const std::string a = word();
    const std::string b = word();
    CAPTURE(a);
    CAPTURE(b);
    const auto d = edit_distance(a, b);
    CHECK(d == oracle::levenshtein(a, b));
    CHECK(d == edit_distance(b, a));
  }
}

TEST_CASE("stem_overlap") {
  CHECK(stem_overlap("running fast", "running fast") == Fraction{1, 1});
  CHECK(stem_overlap("alpha beta", "gamma delta") == Fraction{0, 1});
  // {run, quickli} against {run, slowli}: one shared stem of three.
  CHECK(stem_overlap("run quickly", "running slowly") == Fraction{1, 3});
  CHECK(stem_overlap("", "") == Fraction{0, 1});
  CHECK(stem_overlap("Dogs dogs DOG", "dog") == Fraction{1, 1});
}

TEST_CASE("fractions compare exactly") {
  CHECK(Fraction{1, 2} == Fraction{2, 4});
  CHECK(Fraction{2, 3} > Fraction{1, 2});
  CHECK_FALSE(Fraction{1, 2} > Fraction{1, 2});
}

TEST_CASE("numeric golds") {
  CHECK(is_numeric_answer("1066"));
  CHECK(is_numeric_answer("1,000,000"));
  CHECK(is_numeric_answer("-3.5"));
  CHECK_FALSE(is_numeric_answer("seven"));
  CHECK_FALSE(is_numeric_answer("12 angry men"));
  CHECK_FALSE(is_numeric_answer(""));
}

TEST_CASE("heuristic 1: negation") {
  CHECK(reason("The answer is not Paris", "Paris") == ExclusionReason::kNegation);
  CHECK(reason("the answer is  NOT lyon", "Paris") == ExclusionReason::kNegation);
  CHECK(reason("Berlin", "Paris") == std::nullopt);
  CHECK(reason("The answer is Berlin", "Paris") == std::nullopt);
}

TEST_CASE("heuristic 2: synonyms") {
  const auto cfg = with_lexicon();
  CHECK(reason("automobile", "car", cfg) == ExclusionReason::kSynonym);
  CHECK(reason("a red automobile", "Car", cfg) == ExclusionReason::kSynonym);
  CHECK(reason("bicycle", "car", cfg) == std::nullopt);
  // Without a lexicon the heuristic is off.
  CHECK(reason("automobile", "car") == std::nullopt);
}

TEST_CASE("heuristic 3: stem overlap") {
  // {run, dog} against {the, run, dog}: 2/3 > 1/2.
  CHECK(reason("running dogs", "the running dog") == ExclusionReason::kStemOverlap);
  // Exactly one half does not exceed the threshold.
  CHECK(reason("species richness", "species diversity") != ExclusionReason::kStemOverlap);
  CHECK(reason("species richness", "biodiversity") == std::nullopt);
}

TEST_CASE("heuristic 4: edit distance") {
  CHECK(reason("Pars", "Paris") == ExclusionReason::kEditDistance);
  CHECK(reason("dog", "cat") == std::nullopt);
  CHECK(reason("none", "Paris") == ExclusionReason::kEditDistance);
  CHECK(reason("great question", "Paris") == ExclusionReason::kEditDistance);
  // Numeric golds are exempt from the distance requirement.
  CHECK(reason("1067", "1066") == std::nullopt);
  CHECK(reason("none", "1066") == ExclusionReason::kEditDistance);
}

TEST_CASE("heuristic 5: initial word") {
  CHECK(reason("Paris", "Paris France") == ExclusionReason::kInitialWord);
  CHECK(reason("France", "Paris France") == std::nullopt);
}

TEST_CASE("heuristic 6: formatting") {
  const ModelFlags star{true};
  CHECK(reason("Berlin", "Paris", {}, star) == ExclusionReason::kFormatting);
  CHECK(reason("**Berlin**", "Paris", {}, star) == std::nullopt);
  CHECK(reason("Berlin", "Paris", {}, {}) == std::nullopt);
}

TEST_CASE("the first firing heuristic is reported") {
  // Negation and edit distance both fire.
  CHECK(reason("The answer is not Pari", "the answer is not paris") ==
        ExclusionReason::kNegation);
  // Synonym and formatting both fire.
  CHECK(reason("automobile", "car", with_lexicon(), {true}) == ExclusionReason::kSynonym);
  // Stem overlap and edit distance both fire.
  CHECK(reason("running dog", "running dogs") == ExclusionReason::kStemOverlap);
}

TEST_CASE("disabling heuristics before the reported one changes nothing") {
  const std::vector<std::string> vocab = {"the", "answer", "is", "not", "paris", "pars",
                                          "car", "automobile", "none", "1066", "dog",
                                          "**dog**", "france", "running", "runs"};
  std::mt19937 rng(17);
  auto phrase = [&] {
    std::string s;
    const int n = 1 + static_cast<int>(rng() % 4);
    for (int i = 0; i < n; ++i) s += (i ? " " : "") + vocab[rng() % vocab.size()];
    return s;
  };
  for (int trial = 0; trial < 2000; ++trial) {
    const std::string text = rng() % 4 == 0 ? "the answer is not " + phrase() : phrase();
    const std::string gold = phrase();
    const ModelFlags flags{rng() % 2 == 0};
    const CurationConfig full = with_lexicon();
    const auto d = refine_candidate(text, gold, full, flags);
    const int fired = d.keep() ? 99 : static_cast<int>(*d.excluded);
    CAPTURE(text);
    CAPTURE(gold);

    CurationConfig no_neg = full;
    no_neg.negation_prefixes.clear();
    CurationConfig no_syn = full;
    no_syn.synonym_provider = nullptr;
    CurationConfig no_stem = full;
    no_stem.stem_overlap_threshold = {1, 1};
    const std::vector<std::pair<int, CurationConfig>> disabled = {
        {0, no_neg}, {1, no_syn}, {2, no_stem}};
    for (const auto& [h, cfg] : disabled) {
      const auto d2 = refine_candidate(text, gold, cfg, flags);
      if (h < fired) {
        CHECK(d2 == d);
      } else if (h == fired) {
        CHECK((d2.keep() || static_cast<int>(*d2.excluded) > fired));
      }
    }
    if (fired < 5) {
      CHECK(refine_candidate(text, gold, full, {!flags.star_formatting}) == d);
    }
  }
}

TEST_CASE("multiple golds report the earliest reason") {
  const CurationConfig cfg;
  // Against "Paris France" the initial-word rule fires; against "Parisi"
  // the edit-distance rule fires earlier in the order.
  const auto d = refine_against_all("Paris", {"Paris France", "Parisi"}, cfg);
  CHECK(d.excluded == ExclusionReason::kEditDistance);
  CHECK(refine_against_all("dog", {"cat", "horse"}, cfg).keep());
}

TEST_CASE("label_outcome") {
  using choke::testing::greedy;
  using choke::testing::make_record;
  const CurationConfig cfg;
  QARecord r = make_record("q", {"genetic drift"}, "genetic drift",
                           greedy({{"mutation", 0.49, 0.3}}), {});
  CHECK(label_outcome(r, {true, {}}, cfg) == OutcomeLabel::hallucination());
  CHECK(label_outcome(r, {false, {}}, cfg) ==
        OutcomeLabel::excluded(ExclusionReason::kNoKnowledge));
  r.setting_greedy = greedy({{"The", 0.9, 0.01}, {" answer", 0.9, 0.01},
                             {" is", 0.9, 0.01}, {" genetic drift", 0.8, 0.1}});
  CHECK(label_outcome(r, {true, {}}, cfg) == OutcomeLabel::factual());
}

TEST_CASE("realistic hallucination pairs survive curation") {
  const CurationConfig cfg;
  CHECK(refine_against_all("species richness", {"biodiversity"}, cfg).keep());
  CHECK(refine_against_all("Miley Cyrus", {"alexander"}, cfg).keep());
  CHECK(refine_against_all("mutation", {"genetic drift"}, cfg).keep());
  CHECK(refine_against_all("Molly Parker", {"June Lockhart"}, cfg).keep());
}

TEST_CASE("synonym lexicon loading") {
  const auto lex = SynonymLexicon::from_json(
      nlohmann::json::parse(R"({"Car": ["automobile", "Motor Car"], "big": ["large"]})"));
  CHECK(lex.size() == 2);
  CHECK(lex.lookup("car") == std::vector<std::string>{"automobile", "motor car"});
  CHECK(lex.lookup("CAR ") == std::vector<std::string>{"automobile", "motor car"});
  CHECK(lex.lookup("tiny").empty());
  CHECK_THROWS_AS(SynonymLexicon::from_json(nlohmann::json::parse("[1]")), Error);
}

TEST_CASE("curation config bounds") {
  CurationConfig cfg;
  CHECK_NOTHROW(check_config(cfg));
  cfg.stem_overlap_threshold = {0, 1};
  CHECK_THROWS_AS(check_config(cfg), Error);
  cfg.stem_overlap_threshold = {3, 2};
  CHECK_THROWS_AS(check_config(cfg), Error);
  cfg.stem_overlap_threshold = {1, 1};
  cfg.edit_distance_min = -1;
  CHECK_THROWS_AS(check_config(cfg), Error);
}
