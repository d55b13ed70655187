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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "choke/certainty.h"
#include "choke/record.h"

namespace choke {

enum class Balancing { kEqualSize, kNaturalRatio };

const char* balancing_name(Balancing b);
Balancing balancing_from_string(std::string_view name);

struct ThresholdResult {
  MetricId metric_id = MetricId::kProbability;
  double t_star = 0.0;  // unified certainty units
  std::int64_t misclassifications = 0;
  Balancing balancing = Balancing::kEqualSize;
  std::uint64_t sample_seed = 0;
  std::size_t candidates_evaluated = 0;
  std::size_t n_hallucination = 0;  // after balancing
  std::size_t n_factual = 0;        // after balancing

  bool operator==(const ThresholdResult&) const = default;
};

// Fits T* = argmin_t Σ 1[h > t] + Σ 1[f < t] over hallucination certainties
// `hallucination` and factual certainties `factual`.
//
// Candidates are the midpoints between consecutive distinct pooled values plus
// one sentinel below the minimum and one above the maximum (offset by half the
// outermost gap, or 0.5 when all values coincide). The objective is piecewise
// constant, so this scan is exact. Ties go to the smallest t.
//
// kEqualSize first subsamples the larger class without replacement, seeded by
// `seed`, down to the size of the smaller. Throws Error(kEmptySet).
ThresholdResult optimal_threshold(std::span<const double> hallucination,
                                  std::span<const double> factual,
                                  Balancing balancing, std::uint64_t seed,
                                  MetricId metric = MetricId::kProbability);

// Labeled record with whatever unified certainties were computed for it.
struct ScoredRecord {
  std::string question_id;
  OutcomeLabel label = OutcomeLabel::factual();
  std::map<MetricId, double> certainty;
  std::string first_token_text;  // first answer token of the greedy answer
};

// Certainties of the records with the given outcome kind that carry `metric`.
std::vector<double> certainties_of(std::span<const ScoredRecord> records,
                                   OutcomeLabel::Kind kind, MetricId metric);

struct ChokeVerdict {
  std::string question_id;
  double certainty = 0.0;
  bool is_choke = false;  // hallucination with certainty > t_star

  bool operator==(const ChokeVerdict&) const = default;
};

// One verdict per hallucination record, in input order. Throws
// Error(kMissingScore) when a hallucination lacks the threshold's metric.
std::vector<ChokeVerdict> classify_choke(std::span<const ScoredRecord> records,
                                         const ThresholdResult& threshold);

struct CdfPoint {
  double certainty_level = 0.0;
  double cum_frac_hallucination = 0.0;  // fraction with certainty >= level
  double cum_frac_factual = 0.0;
};

// Survival-style cumulative curves for hallucinations and factual answers.
// grid_size == 0 uses the sorted distinct pooled scores as the grid; otherwise
// grid_size points evenly spanning [min, max]. Throws Error(kEmptyClass).
std::vector<CdfPoint> cdf_curves(std::span<const ScoredRecord> records,
                                 MetricId metric, std::size_t grid_size);

// CSV with header certainty_level,cum_frac_hallucination,cum_frac_factual.
std::string cdf_to_csv(std::span<const CdfPoint> curve);

// Percentage of verdicts that are CHOKE. Throws Error(kEmptyVerdicts).
double choke_fraction(std::span<const ChokeVerdict> verdicts);

}  // namespace choke
