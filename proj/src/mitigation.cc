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

#include "choke/mitigation.h"

#include <algorithm>

#include "choke/csv.h"
#include "choke/error.h"

namespace choke {

const char* mitigation_method_name(MitigationMethod m) {
  switch (m) {
    case MitigationMethod::kProbability: return "probability";
    case MitigationMethod::kSamplingAgreement: return "sampling_agreement";
    case MitigationMethod::kPredictiveEntropy: return "predictive_entropy";
  }
  return "probability";
}

MetricId metric_for(MitigationMethod m) {
  switch (m) {
    case MitigationMethod::kProbability: return MetricId::kProbability;
    case MitigationMethod::kSamplingAgreement: return MetricId::kSamplingAgreement;
    case MitigationMethod::kPredictiveEntropy: return MetricId::kPredictiveEntropy;
  }
  return MetricId::kProbability;
}

double unmitigated_rate(std::span<const double> hallucination_scores, double t_star) {
  if (hallucination_scores.empty()) {
    throw Error(ErrorCode::kEmptyScores, "no hallucination scores");
  }
  const auto above =
      std::count_if(hallucination_scores.begin(), hallucination_scores.end(),
                    [t_star](double c) { return c > t_star; });
  return 100.0 * static_cast<double>(above) /
         static_cast<double>(hallucination_scores.size());
}

std::vector<MitigationReport> compare_methods(std::span<const ScoredRecord> records,
                                              Balancing balancing,
                                              std::uint64_t seed) {
  std::vector<MitigationReport> out;
  for (MitigationMethod method : kAllMitigationMethods) {
    const MetricId metric = metric_for(method);
    for (const auto& r : records) {
      if (r.label.is_excluded()) continue;
      if (!r.certainty.contains(metric)) {
        throw Error(ErrorCode::kMissingMetric,
                    std::string("record ") + r.question_id + " lacks " +
                        metric_name(metric));
      }
    }
    const auto h = certainties_of(records, OutcomeLabel::Kind::kHallucination, metric);
    const auto f = certainties_of(records, OutcomeLabel::Kind::kFactual, metric);
    const ThresholdResult t = optimal_threshold(h, f, balancing, seed, metric);
    out.push_back({method, t.t_star, unmitigated_rate(h, t.t_star), h.size()});
  }
  return out;
}

std::string mitigation_to_csv(std::string_view model,
                              std::span<const MitigationReport> reports) {
  std::string out = csv_row({"model", "method", "t_star", "unmitigated_percent"});
  for (const auto& r : reports) {
    out += csv_row({std::string(model), mitigation_method_name(r.method),
                    format_double(r.t_star), format_double(r.unmitigated_percent)});
  }
  return out;
}

}  // namespace choke
