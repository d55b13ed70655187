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
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace choke {

using IdSet = std::set<std::string>;

// 100 * |A ∩ B| / |A ∪ B|; 0 when both are empty.
double jaccard(const IdSet& a, const IdSet& b);

struct ConsistencyReport {
  double jaccard_percent = 0.0;
  double permutation_mean_percent = 0.0;
  double p_value = 1.0;  // (1 + #{J_perm >= J_obs}) / (1 + n_permutations)
  std::int64_t n_permutations = 0;
  std::int64_t n_at_least_observed = 0;
  bool shared_only = false;
  bool empty_intersection = false;  // set by the shared-only path
  std::uint64_t seed = 0;
};

nlohmann::json to_json(const ConsistencyReport& r);

// Observed Jaccard of the CHOKE sets against random subsets of each
// hallucination set with the CHOKE set's size, drawn independently per side
// without replacement. Permutation i uses RNG stream (seed, i), so any
// `threads` value gives identical results.
//
// Throws Error(kSizeExceedsPopulation) or Error(kSubsetViolation) when a
// CHOKE set is not drawn from its hallucination set.
ConsistencyReport permutation_test(const IdSet& hall_a, const IdSet& hall_b,
                                   const IdSet& choke_a, const IdSet& choke_b,
                                   std::int64_t n_permutations = 10000,
                                   std::uint64_t seed = 0, unsigned threads = 1);

struct SharedInputs {
  IdSet hall_a, hall_b, choke_a, choke_b;
  bool empty_intersection = false;
};

// Restricts all four sets to hall_a ∩ hall_b.
SharedInputs shared_filter(const IdSet& hall_a, const IdSet& hall_b,
                           const IdSet& choke_a, const IdSet& choke_b);

// shared_filter followed by permutation_test; the report is flagged
// shared_only and carries the empty-intersection flag.
ConsistencyReport shared_permutation_test(const IdSet& hall_a, const IdSet& hall_b,
                                          const IdSet& choke_a, const IdSet& choke_b,
                                          std::int64_t n_permutations,
                                          std::uint64_t seed, unsigned threads = 1);

struct TTestResult {
  double t_statistic = 0.0;
  double p_value = 1.0;  // two-sided
  double degrees_of_freedom = 0.0;
};

// Welch's unequal-variance two-sample t-test. Throws Error(kInsufficientData)
// unless both samples have >= 2 values and at least one has nonzero variance.
TTestResult welch_t_test(std::span<const double> a, std::span<const double> b);

// Welch test on first-answer-token character lengths of CHOKE versus
// low-certainty hallucinations.
TTestResult first_token_length_ttest(std::span<const int> choke_lengths,
                                     std::span<const int> low_cert_lengths);

// One cell group of the cross-setting Jaccard table: random (permutation
// mean) and certain (observed) similarity for a model/dataset/metric.
struct JaccardTableRow {
  std::string model;
  std::string dataset;
  std::string metric;
  double random_percent = 0.0;
  double certain_percent = 0.0;
  std::optional<double> p_value;

  bool operator==(const JaccardTableRow&) const = default;
};

// Header: model,dataset,metric,random,certain,p_value
std::string jaccard_table_to_csv(std::span<const JaccardTableRow> rows);
std::vector<JaccardTableRow> jaccard_table_from_csv(std::string_view csv);

}  // namespace choke
