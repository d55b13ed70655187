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
#include <utility>
#include <vector>

#include "choke/record.h"

namespace choke::testing {

// Token with its probability; the single logged alternative gets `alt_p`
// (0 means a zero-probability alternative, logged as -inf).
struct Tok {
  std::string text;
  double p = 1.0;
  double alt_p = 0.0;
};

TokenStep make_step(const Tok& t);

Generation greedy(std::vector<Tok> tokens);
Generation sampled(std::vector<Tok> tokens, double temperature = 1.0,
                   long long seed = 0);

// Single-token generation with sequence probability p.
Generation sampled_text(const std::string& text, double p, double temperature = 1.0);

// A validation-clean record: one greedy + five sampled probes all answering
// `probe_text`, the given setting greedy generation and samples.
QARecord make_record(const std::string& id, std::vector<std::string> gold,
                     const std::string& probe_text, Generation setting_greedy,
                     std::vector<Generation> samples,
                     const std::string& setting = "child");

// The planted 100-record corpus: 40 records without knowledge, 40 factual,
// 20 hallucinations. Greedy first-answer-token probabilities are
//   factual         0.60 .. 0.64875
//   hallucinations  12 in 0.05 .. 0.27 and 8 in 0.70 .. 0.91
// so every equal-size threshold falls between 0.27 and 0.60 and exactly 8 of
// the 20 hallucinations are CHOKE.
std::vector<QARecord> planted_corpus(const std::string& setting = "child");

// Hallucination ids in the planted corpus above the planted threshold.
std::vector<std::string> planted_choke_ids();

}  // namespace choke::testing
