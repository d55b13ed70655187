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
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "choke/record.h"

namespace choke {

// Order matters: the mitigation report and CSV outputs follow it.
enum class MetricId {
  kProbability,
  kProbDiff,
  kSemanticEntropy,
  kPredictiveEntropy,
  kSamplingAgreement,
};

inline constexpr MetricId kAllMetrics[] = {
    MetricId::kProbability, MetricId::kProbDiff, MetricId::kSemanticEntropy,
    MetricId::kPredictiveEntropy, MetricId::kSamplingAgreement};

const char* metric_name(MetricId id);
MetricId metric_from_string(std::string_view name);

struct CertaintyScore {
  MetricId metric_id = MetricId::kProbability;
  double raw_value = 0.0;
  double certainty = 0.0;  // higher is more certain, for every metric

  bool operator==(const CertaintyScore&) const = default;
};

// Identity for probability, prob_diff and sampling_agreement; negation for
// the two entropies.
double to_unified_certainty(MetricId id, double raw_value);

CertaintyScore make_score(MetricId id, double raw_value);

using SkipList = std::set<std::string, std::less<>>;

// Tokens that precede the actual answer (chat markers, "The answer is", ...).
const SkipList& default_skip_tokens();

struct AnswerTokenPosition {
  std::size_t index = 0;
  bool all_skipped = false;  // every token was skippable; index falls back to 0
};

// First token whose text is not in `skip`. Throws Error(kEmptyGeneration).
AnswerTokenPosition first_answer_token_index(const Generation& g,
                                             const SkipList& skip);

// exp(logprob) of the first answer token.
CertaintyScore probability_certainty(const Generation& g, const SkipList& skip);

// exp(top-1) - exp(top-2) at the first answer token. Throws
// Error(kInsufficientAlternatives) when fewer than two are logged.
CertaintyScore probability_diff_certainty(const Generation& g,
                                          const SkipList& skip);

struct ClusterAssignment {
  std::vector<int> cluster_ids;  // one per generation
  int cluster_count = 0;

  // Validates that ids are contiguous in [0, C) in first-appearance order.
  static ClusterAssignment from_ids(std::vector<int> ids);

  bool operator==(const ClusterAssignment&) const = default;
};

using EquivalenceOracle = std::function<bool(std::string_view, std::string_view)>;

// Normalized exact match.
bool exact_match_equivalence(std::string_view a, std::string_view b);

// Connected components of the oracle's relation; ids numbered by first
// appearance. Oracle exceptions surface as Error(kOracleFailure).
ClusterAssignment cluster_generations(std::span<const Generation> samples,
                                      const EquivalenceOracle& equivalence);

// -(1/C) Σ_i log p(c_i), where p(c_i) is cluster i's share of the summed
// sequence likelihood of all samples, evaluated with log-sum-exp.
CertaintyScore semantic_entropy(std::span<const Generation> samples,
                                const ClusterAssignment& assignment);

// -(1/L) Σ_i log p(sample_i).
CertaintyScore predictive_entropy(std::span<const Generation> samples);

// 1 - |unique normalized texts| / |samples|.
CertaintyScore sampling_agreement(std::span<const Generation> samples);

// All metrics for one record. Probability metrics read setting_greedy; the
// sample-based metrics read setting_samples, clustered with the record's
// cluster_ids when present and `equivalence` otherwise. Per-metric failures
// are collected in `errors` rather than thrown.
struct RecordScores {
  std::map<MetricId, CertaintyScore> scores;
  std::map<MetricId, std::string> errors;
  std::string first_token_text;
  bool first_token_all_skipped = false;
};

RecordScores score_record(const QARecord& record, const SkipList& skip,
                          std::span<const MetricId> metrics,
                          const EquivalenceOracle& equivalence = exact_match_equivalence);

}  // namespace choke
