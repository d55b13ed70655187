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

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace choke {

// ASCII case-fold, trim, and collapse internal whitespace runs to one space.
// Bytes outside ASCII pass through unchanged.
std::string normalize_text(std::string_view s);

// Whitespace tokenization of normalize_text(s).
std::vector<std::string> split_words(std::string_view s);

// True iff `needle` occurs in `haystack` on word boundaries. Both arguments
// are expected to be normalized already.
bool contains_phrase(std::string_view haystack, std::string_view needle);

// Maps one lowercase word to its stem.
using Stemmer = std::function<std::string(std::string_view)>;

// Porter (1980) suffix-stripping stemmer, original rule set. Expects a
// lowercase word; words of length <= 2 are returned unchanged.
std::string porter_stem(std::string_view word);

// Stems every word of normalize_text(s) and joins with single spaces.
std::string stem_text(std::string_view s, const Stemmer& stemmer);

}  // namespace choke
