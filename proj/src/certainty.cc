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

#include "choke/certainty.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_set>

#include "choke/error.h"
#include "choke/text.h"

namespace choke {

const char* metric_name(MetricId id) {
  switch (id) {
    case MetricId::kProbability: return "probability";
    case MetricId::kProbDiff: return "prob_diff";
    case MetricId::kSemanticEntropy: return "semantic_entropy";
    case MetricId::kPredictiveEntropy: return "predictive_entropy";
    case MetricId::kSamplingAgreement: return "sampling_agreement";
  }
  return "probability";
}

MetricId metric_from_string(std::string_view name) {
  for (MetricId id : kAllMetrics) {
    if (name == metric_name(id)) return id;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown metric '" + std::string(name) + "'");
}

double to_unified_certainty(MetricId id, double raw_value) {
  switch (id) {
    case MetricId::kSemanticEntropy:
    case MetricId::kPredictiveEntropy:
      return 0.0 - raw_value;  // keeps +0.0 for a zero entropy
    default:
      return raw_value;
  }
}

CertaintyScore make_score(MetricId id, double raw_value) {
  return {id, raw_value, to_unified_certainty(id, raw_value)};
}

const SkipList& default_skip_tokens() {
  static const SkipList kSkip = {
      "<|assistant|>", "<|user|>", "<|begin_of_text|>", "<|end_of_text|>",
      "<|eot_id|>",    "<|start|>", "<|end|>",          "<|sep|>",
      "<|sep_id|>",    "assistant", "user",             "\n",
      "answer",        "The",       "Answer",           "\"",
      "'",             " answer",   "is",               "it",
      "it's",          ":",         " ",                " is",
      " correct",      "correct",   "*",                "**",
      " **"};
  return kSkip;
}

AnswerTokenPosition first_answer_token_index(const Generation& g,
                                             const SkipList& skip) {
  if (g.token_steps.empty()) {
    throw Error(ErrorCode::kEmptyGeneration, "generation has no tokens");
  }
  for (std::size_t i = 0; i < g.token_steps.size(); ++i) {
    if (!skip.contains(g.token_steps[i].token_text)) return {i, false};
  }
  return {0, true};
}

CertaintyScore probability_certainty(const Generation& g, const SkipList& skip) {
  const auto pos = first_answer_token_index(g, skip);
  return make_score(MetricId::kProbability,
                    std::exp(g.token_steps[pos.index].logprob));
}

CertaintyScore probability_diff_certainty(const Generation& g,
                                          const SkipList& skip) {
  const auto pos = first_answer_token_index(g, skip);
  const auto& alts = g.token_steps[pos.index].top_alternatives;
  if (alts.size() < 2) {
    throw Error(ErrorCode::kInsufficientAlternatives,
                "first answer token logs fewer than two alternatives");
  }
  return make_score(MetricId::kProbDiff,
                    std::exp(alts[0].logprob) - std::exp(alts[1].logprob));
}

// ---------------------------------------------------------------------------
// Clustering

ClusterAssignment ClusterAssignment::from_ids(std::vector<int> ids) {
  const int top = ids.empty() ? -1 : *std::max_element(ids.begin(), ids.end());
  std::vector<bool> used(static_cast<std::size_t>(std::max(top + 1, 0)), false);
  for (int id : ids) {
    if (id < 0) {
      throw Error(ErrorCode::kInvalidArgument, "cluster ids must be nonnegative");
    }
    used[static_cast<std::size_t>(id)] = true;
  }
  if (std::find(used.begin(), used.end(), false) != used.end()) {
    throw Error(ErrorCode::kInvalidArgument, "cluster ids must be contiguous in [0, C)");
  }
  return {std::move(ids), top + 1};
}

bool exact_match_equivalence(std::string_view a, std::string_view b) {
  return normalize_text(a) == normalize_text(b);
}

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

ClusterAssignment cluster_generations(std::span<const Generation> samples,
                                      const EquivalenceOracle& equivalence) {
  DisjointSets sets(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    for (std::size_t j = i + 1; j < samples.size(); ++j) {
      if (sets.find(i) == sets.find(j)) continue;
      bool same = false;
      try {
        same = equivalence(samples[i].text, samples[j].text);
      } catch (const std::exception& e) {
        throw Error(ErrorCode::kOracleFailure,
                    std::string("equivalence oracle failed: ") + e.what());
      }
      if (same) sets.unite(i, j);
    }
  }
  std::vector<int> ids(samples.size());
  std::vector<int> root_id(samples.size(), -1);
  int next = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const std::size_t root = sets.find(i);
    if (root_id[root] < 0) root_id[root] = next++;
    ids[i] = root_id[root];
  }
  return {std::move(ids), next};
}

// ---------------------------------------------------------------------------
// Sample-based metrics

namespace {

double log_sum_exp(std::span<const double> xs) {
  const double hi = *std::max_element(xs.begin(), xs.end());
  if (std::isinf(hi) && hi < 0) return hi;
  double acc = 0.0;
  for (double x : xs) acc += std::exp(x - hi);
  return hi + std::log(acc);
}

void require_samples(std::span<const Generation> samples) {
  if (samples.empty()) {
    throw Error(ErrorCode::kEmptySamples, "no sampled generations");
  }
}

}  // namespace

CertaintyScore semantic_entropy(std::span<const Generation> samples,
                                const ClusterAssignment& assignment) {
  require_samples(samples);
  if (assignment.cluster_ids.size() != samples.size() ||
      assignment.cluster_count < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "cluster assignment does not cover the samples");
  }
  std::vector<std::vector<double>> members(assignment.cluster_count);
  std::vector<double> all;
  all.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double ll = samples[i].sequence_logprob();
    members[assignment.cluster_ids[i]].push_back(ll);
    all.push_back(ll);
  }
  const double log_total = log_sum_exp(all);
  if (std::isinf(log_total)) {
    throw Error(ErrorCode::kZeroTotalMass, "all sample likelihoods are zero");
  }
  double sum_log_p = 0.0;
  for (const auto& m : members) sum_log_p += log_sum_exp(m) - log_total;
  // A single cluster gives exactly log 1 = 0; clamp the -0.0 / rounding dust.
  const double se = std::max(0.0, -sum_log_p / assignment.cluster_count);
  return make_score(MetricId::kSemanticEntropy, se);
}

CertaintyScore predictive_entropy(std::span<const Generation> samples) {
  require_samples(samples);
  double total = 0.0;
  for (const auto& g : samples) total += g.sequence_logprob();
  const double pe = -total / static_cast<double>(samples.size());
  return make_score(MetricId::kPredictiveEntropy, pe == 0.0 ? 0.0 : pe);
}

CertaintyScore sampling_agreement(std::span<const Generation> samples) {
  require_samples(samples);
  std::unordered_set<std::string> unique;
  for (const auto& g : samples) unique.insert(normalize_text(g.text));
  const double n = static_cast<double>(samples.size());
  return make_score(MetricId::kSamplingAgreement,
                    (n - static_cast<double>(unique.size())) / n);
}

RecordScores score_record(const QARecord& record, const SkipList& skip,
                          std::span<const MetricId> metrics,
                          const EquivalenceOracle& equivalence) {
  RecordScores out;
  if (!record.setting_greedy.token_steps.empty()) {
    const auto pos = first_answer_token_index(record.setting_greedy, skip);
    out.first_token_text = record.setting_greedy.token_steps[pos.index].token_text;
    out.first_token_all_skipped = pos.all_skipped;
  }
  std::optional<ClusterAssignment> clusters;
  for (MetricId id : metrics) {
    try {
      switch (id) {
        case MetricId::kProbability:
          out.scores[id] = probability_certainty(record.setting_greedy, skip);
          break;
        case MetricId::kProbDiff:
          out.scores[id] = probability_diff_certainty(record.setting_greedy, skip);
          break;
        case MetricId::kSemanticEntropy:
          if (!clusters) {
            clusters = record.cluster_ids
                           ? ClusterAssignment::from_ids(*record.cluster_ids)
                           : cluster_generations(record.setting_samples, equivalence);
          }
          out.scores[id] = semantic_entropy(record.setting_samples, *clusters);
          break;
        case MetricId::kPredictiveEntropy:
          out.scores[id] = predictive_entropy(record.setting_samples);
          break;
        case MetricId::kSamplingAgreement:
          out.scores[id] = sampling_agreement(record.setting_samples);
          break;
      }
    } catch (const Error& e) {
      out.errors[id] = std::string(error_code_name(e.code())) + ": " + e.what();
    }
  }
  return out;
}

}  // namespace choke
