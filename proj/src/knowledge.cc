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

#include "choke/knowledge.h"

#include <algorithm>

#include "choke/text.h"

namespace choke {

bool exact_match_any(const std::string& text,
                     const std::vector<std::string>& gold_answers) {
  const std::string norm = normalize_text(text);
  return std::any_of(gold_answers.begin(), gold_answers.end(),
                     [&](const std::string& g) { return normalize_text(g) == norm; });
}

KnowledgeLabel label_knowledge(const QARecord& record) {
  KnowledgeLabel label;
  label.probe_matches.reserve(record.knowledge_probe.size());
  for (const auto& probe : record.knowledge_probe) {
    label.probe_matches.push_back(exact_match_any(probe.text, record.gold_answers));
  }
  label.knows = std::all_of(label.probe_matches.begin(), label.probe_matches.end(),
                            [](bool m) { return m; });
  return label;
}

}  // namespace choke
