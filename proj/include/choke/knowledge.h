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

#include <string>
#include <vector>

#include "choke/record.h"

namespace choke {

struct KnowledgeLabel {
  bool knows = false;
  std::vector<bool> probe_matches;  // one per knowledge_probe generation

  bool operator==(const KnowledgeLabel&) const = default;
};

// True iff normalize_text(text) equals normalize_text(g) for some gold g.
bool exact_match_any(const std::string& text,
                     const std::vector<std::string>& gold_answers);

// A record "knows" the answer when every probe generation, greedy and
// sampled alike, exactly matches a gold answer after normalization. Expects a
// validated record (at least the one greedy probe).
KnowledgeLabel label_knowledge(const QARecord& record);

}  // namespace choke
