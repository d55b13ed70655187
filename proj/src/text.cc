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

#include "choke/text.h"

#include <array>
#include <utility>

namespace choke {

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

char to_lower(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

}  // namespace

std::string normalize_text(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (char c : s) {
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(to_lower(c));
  }
  return out;
}

std::vector<std::string> split_words(std::string_view s) {
  std::vector<std::string> words;
  const std::string norm = normalize_text(s);
  std::size_t start = 0;
  while (start < norm.size()) {
    std::size_t end = norm.find(' ', start);
    if (end == std::string::npos) end = norm.size();
    words.push_back(norm.substr(start, end - start));
    start = end + 1;
  }
  return words;
}

bool contains_phrase(std::string_view haystack, std::string_view needle) {
  if (needle.empty()) return false;
  std::size_t pos = haystack.find(needle);
  while (pos != std::string_view::npos) {
    const bool left_ok = pos == 0 || haystack[pos - 1] == ' ';
    const std::size_t end = pos + needle.size();
    const bool right_ok = end == haystack.size() || haystack[end] == ' ';
    if (left_ok && right_ok) return true;
    pos = haystack.find(needle, pos + 1);
  }
  return false;
}

// ---------------------------------------------------------------------------
// Porter stemmer

namespace {

class PorterWord {
 public:
  explicit PorterWord(std::string_view w) : b_(w) {}

  std::string take() && { return std::move(b_); }

  void step1a() {
    if (ends("sses")) {
      replace(4, "ss");
    } else if (ends("ies")) {
      replace(3, "i");
    } else if (ends("ss")) {
      // unchanged
    } else if (ends("s")) {
      replace(1, "");
    }
  }

  void step1b() {
    bool cleanup = false;
    if (ends("eed")) {
      if (measure(b_.size() - 3) > 0) replace(3, "ee");
      return;
    }
    if (ends("ed") && has_vowel(b_.size() - 2)) {
      replace(2, "");
      cleanup = true;
    } else if (ends("ing") && has_vowel(b_.size() - 3)) {
      replace(3, "");
      cleanup = true;
    }
    if (!cleanup) return;
    if (ends("at")) {
      replace(2, "ate");
    } else if (ends("bl")) {
      replace(2, "ble");
    } else if (ends("iz")) {
      replace(2, "ize");
    } else if (ends_double_consonant(b_.size())) {
      const char last = b_.back();
      if (last != 'l' && last != 's' && last != 'z') b_.pop_back();
    } else if (measure(b_.size()) == 1 && ends_cvc(b_.size())) {
      b_ += 'e';
    }
  }

  void step1c() {
    if (ends("y") && has_vowel(b_.size() - 1)) b_.back() = 'i';
  }

  void step2() {
    static constexpr std::array<std::pair<std::string_view, std::string_view>, 20>
        kRules = {{{"ational", "ate"}, {"tional", "tion"}, {"enci", "ence"},
                   {"anci", "ance"},   {"izer", "ize"},    {"abli", "able"},
                   {"alli", "al"},     {"entli", "ent"},   {"eli", "e"},
                   {"ousli", "ous"},   {"ization", "ize"}, {"ation", "ate"},
                   {"ator", "ate"},    {"alism", "al"},    {"iveness", "ive"},
                   {"fulness", "ful"}, {"ousness", "ous"}, {"aliti", "al"},
                   {"iviti", "ive"},   {"biliti", "ble"}}};
    apply_first(kRules, 0);
  }

  void step3() {
    static constexpr std::array<std::pair<std::string_view, std::string_view>, 7>
        kRules = {{{"icate", "ic"},
                   {"ative", ""},
                   {"alize", "al"},
                   {"iciti", "ic"},
                   {"ical", "ic"},
                   {"ful", ""},
                   {"ness", ""}}};
    apply_first(kRules, 0);
  }

  void step4() {
    static constexpr std::array<std::string_view, 19> kSuffixes = {
        "al",  "ance", "ence", "er",  "ic",  "able", "ible",
        "ant", "ement", "ment", "ent", "ion", "ou",  "ism",
        "ate", "iti",  "ous",  "ive", "ize"};
    for (std::string_view suffix : kSuffixes) {
      if (!ends(suffix)) continue;
      const std::size_t stem_len = b_.size() - suffix.size();
      bool ok = measure(stem_len) > 1;
      if (ok && suffix == "ion") {
        ok = stem_len > 0 && (b_[stem_len - 1] == 's' || b_[stem_len - 1] == 't');
      }
      if (ok) b_.resize(stem_len);
      return;
    }
  }

  void step5() {
    if (ends("e")) {
      const std::size_t stem_len = b_.size() - 1;
      const int m = measure(stem_len);
      if (m > 1 || (m == 1 && !ends_cvc(stem_len))) b_.pop_back();
    }
    if (measure(b_.size()) > 1 && ends_double_consonant(b_.size()) &&
        b_.back() == 'l') {
      b_.pop_back();
    }
  }

 private:
  template <std::size_t N>
  void apply_first(
      const std::array<std::pair<std::string_view, std::string_view>, N>& rules,
      int min_measure) {
    for (const auto& [suffix, repl] : rules) {
      if (!ends(suffix)) continue;
      if (measure(b_.size() - suffix.size()) > min_measure) {
        replace(suffix.size(), repl);
      }
      return;
    }
  }

  bool consonant(std::size_t i) const {
    switch (b_[i]) {
      case 'a': case 'e': case 'i': case 'o': case 'u':
        return false;
      case 'y':
        return i == 0 || !consonant(i - 1);
      default:
        return true;
    }
  }

  // Number of VC sequences in b_[0, len).
  int measure(std::size_t len) const {
    int m = 0;
    std::size_t i = 0;
    while (i < len && consonant(i)) ++i;
    while (i < len) {
      while (i < len && !consonant(i)) ++i;
      if (i >= len) break;
      while (i < len && consonant(i)) ++i;
      ++m;
    }
    return m;
  }

  bool has_vowel(std::size_t len) const {
    for (std::size_t i = 0; i < len; ++i) {
      if (!consonant(i)) return true;
    }
    return false;
  }

  bool ends_double_consonant(std::size_t len) const {
    return len >= 2 && b_[len - 1] == b_[len - 2] && consonant(len - 1);
  }

  // b_[0, len) ends consonant-vowel-consonant, last not w, x or y.
  bool ends_cvc(std::size_t len) const {
    if (len < 3) return false;
    if (!consonant(len - 1) || consonant(len - 2) || !consonant(len - 3)) {
      return false;
    }
    const char c = b_[len - 1];
    return c != 'w' && c != 'x' && c != 'y';
  }

  bool ends(std::string_view suffix) const {
    return b_.size() >= suffix.size() &&
           std::string_view(b_).substr(b_.size() - suffix.size()) == suffix;
  }

  void replace(std::size_t suffix_len, std::string_view repl) {
    b_.resize(b_.size() - suffix_len);
    b_.append(repl);
  }

  std::string b_;
};

}  // namespace

std::string porter_stem(std::string_view word) {
  if (word.size() <= 2) return std::string(word);
  PorterWord w(word);
  w.step1a();
  w.step1b();
  w.step1c();
  w.step2();
  w.step3();
  w.step4();
  w.step5();
  return std::move(w).take();
}

std::string stem_text(std::string_view s, const Stemmer& stemmer) {
  std::string out;
  for (const auto& word : split_words(s)) {
    if (!out.empty()) out.push_back(' ');
    out += stemmer(word);
  }
  return out;
}

}  // namespace choke
