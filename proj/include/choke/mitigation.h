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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "choke/certainty.h"
#include "choke/threshold.h"

namespace choke {

// Certainty-based abstention methods, in report order.
enum class MitigationMethod { kProbability, kSamplingAgreement, kPredictiveEntropy };

inline constexpr MitigationMethod kAllMitigationMethods[] = {
    MitigationMethod::kProbability, MitigationMethod::kSamplingAgreement,
    MitigationMethod::kPredictiveEntropy};

const char* mitigation_method_name(MitigationMethod m);
MetricId metric_for(MitigationMethod m);

struct MitigationReport {
  MitigationMethod method = MitigationMethod::kProbability;
  double t_star = 0.0;
  double unmitigated_percent = 0.0;
  std::size_t n_hallucinations = 0;

  bool operator==(const MitigationReport&) const = default;
};

// A hallucination is mitigated (abstained on) iff its certainty <= t_star;
// returns the percentage left unmitigated. Throws Error(kEmptyScores).
double unmitigated_rate(std::span<const double> hallucination_scores, double t_star);

// Fits T* per method on its certainties and reports the unmitigated rate over
// every hallucination. Throws Error(kMissingMetric) if a factual or
// hallucination record lacks a method's metric.
std::vector<MitigationReport> compare_methods(std::span<const ScoredRecord> records,
                                              Balancing balancing, std::uint64_t seed);

// Header: model,method,t_star,unmitigated_percent
std::string mitigation_to_csv(std::string_view model,
                              std::span<const MitigationReport> reports);

}  // namespace choke
