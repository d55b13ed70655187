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

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace choke {

// One entry of a token's top-k list. Logprobs are natural-log; -inf encodes a
// zero-probability alternative and is written as JSON null.
struct Alternative {
  std::string token_text;
  double logprob = 0.0;

  bool operator==(const Alternative&) const = default;
};

struct TokenStep {
  std::string token_text;
  double logprob = 0.0;
  std::vector<Alternative> top_alternatives;  // descending by logprob

  bool operator==(const TokenStep&) const = default;
};

enum class DecodeMode { kGreedy, kSampled };

struct Generation {
  std::string text;
  std::vector<TokenStep> token_steps;
  DecodeMode decode_mode = DecodeMode::kGreedy;
  double temperature = 0.0;  // meaningful only when sampled
  std::optional<std::int64_t> rng_seed;

  // Sum of emitted-token logprobs (unnormalized sequence log-likelihood).
  double sequence_logprob() const;

  bool operator==(const Generation&) const = default;
};

class SettingId {
 public:
  enum class Kind { kBase, kChild, kAliceBob, kCustom };

  SettingId() = default;
  // "base", "child" and "alice_bob" map to their kinds; anything else is
  // kept verbatim as a custom setting.
  static SettingId from_string(std::string_view name);

  Kind kind() const { return kind_; }
  std::string str() const;

  bool operator==(const SettingId&) const = default;
  auto operator<=>(const SettingId& other) const { return str() <=> other.str(); }

 private:
  Kind kind_ = Kind::kBase;
  std::string custom_;
};

struct QARecord {
  std::string question_id;
  std::string dataset_id;
  std::string model_id;  // optional in the log; empty when absent
  SettingId setting_id;
  std::string question_text;
  std::string prompt_text;
  std::vector<std::string> gold_answers;
  std::vector<Generation> knowledge_probe;
  Generation setting_greedy;
  std::vector<Generation> setting_samples;
  // Precomputed semantic clusters over setting_samples, if the producer
  // supplied them (e.g. from an entailment model).
  std::optional<std::vector<int>> cluster_ids;

  bool operator==(const QARecord&) const = default;
};

enum class ExclusionReason {
  kNegation,
  kSynonym,
  kStemOverlap,
  kEditDistance,
  kInitialWord,
  kFormatting,
  kNoKnowledge,
  kOther,
};

const char* exclusion_reason_name(ExclusionReason reason);
ExclusionReason exclusion_reason_from_string(std::string_view name);

class OutcomeLabel {
 public:
  enum class Kind { kFactual, kHallucination, kExcluded };

  static OutcomeLabel factual() { return OutcomeLabel(Kind::kFactual, {}); }
  static OutcomeLabel hallucination() {
    return OutcomeLabel(Kind::kHallucination, {});
  }
  static OutcomeLabel excluded(ExclusionReason reason) {
    return OutcomeLabel(Kind::kExcluded, reason);
  }

  Kind kind() const { return kind_; }
  // Set iff kind() == kExcluded.
  std::optional<ExclusionReason> reason() const { return reason_; }

  bool is_factual() const { return kind_ == Kind::kFactual; }
  bool is_hallucination() const { return kind_ == Kind::kHallucination; }
  bool is_excluded() const { return kind_ == Kind::kExcluded; }

  bool operator==(const OutcomeLabel&) const = default;

 private:
  OutcomeLabel(Kind kind, std::optional<ExclusionReason> reason)
      : kind_(kind), reason_(reason) {}

  Kind kind_;
  std::optional<ExclusionReason> reason_;
};

const char* outcome_kind_name(OutcomeLabel::Kind kind);

// ---------------------------------------------------------------------------
// JSONL log schema

enum class ParseMode { kStrict, kLenient };

struct ParseIssue {
  std::size_t line = 0;  // 1-based
  std::string field;     // empty for malformed-json
  std::string message;
};

struct ParseResult {
  std::vector<QARecord> records;
  std::vector<ParseIssue> skipped;  // only populated in lenient mode
};

// Parses newline-delimited JSON records. Blank lines are ignored. In strict
// mode the first bad line throws Error(kMalformedJson | kSchemaViolation);
// in lenient mode bad lines are reported in ParseResult::skipped.
ParseResult parse_records(std::istream& in, ParseMode mode = ParseMode::kStrict);
ParseResult parse_records(std::string_view text,
                          ParseMode mode = ParseMode::kStrict);

QARecord record_from_json(const nlohmann::json& j, std::size_t line = 0);
nlohmann::json record_to_json(const QARecord& record);

Generation generation_from_json(const nlohmann::json& j,
                                const std::string& path = "generation",
                                std::size_t line = 0);
nlohmann::json generation_to_json(const Generation& g);

// One compact JSON object per line, newline-terminated.
std::string serialize_records(const std::vector<QARecord>& records);

// ---------------------------------------------------------------------------
// Validation

struct Violation {
  std::string path;
  std::string message;

  bool operator==(const Violation&) const = default;
};

// Empty iff every record-level invariant holds.
std::vector<Violation> validate_record(const QARecord& record);

// validate_record over every record plus corpus-wide question_id uniqueness.
// Paths are prefixed with the question_id.
std::vector<Violation> validate_corpus(const std::vector<QARecord>& records);

}  // namespace choke
