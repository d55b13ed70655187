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

#include "choke/threshold.h"

#include <algorithm>
#include <iterator>

#include "choke/csv.h"
#include "choke/error.h"
#include "choke/random.h"

namespace choke {

const char* balancing_name(Balancing b) {
  return b == Balancing::kEqualSize ? "equal_size" : "natural_ratio";
}

Balancing balancing_from_string(std::string_view name) {
  if (name == "equal_size") return Balancing::kEqualSize;
  if (name == "natural_ratio") return Balancing::kNaturalRatio;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown balancing '" + std::string(name) + "'");
}

ThresholdResult optimal_threshold(std::span<const double> hallucination,
                                  std::span<const double> factual,
                                  Balancing balancing, std::uint64_t seed,
                                  MetricId metric) {
  if (hallucination.empty() || factual.empty()) {
    throw Error(ErrorCode::kEmptySet,
                "threshold fitting needs at least one hallucination and one "
                "factual score");
  }
  std::vector<double> h(hallucination.begin(), hallucination.end());
  std::vector<double> f(factual.begin(), factual.end());
  if (balancing == Balancing::kEqualSize && h.size() != f.size()) {
    auto rng = make_stream(seed, 0);
    if (h.size() > f.size()) {
      h = sample_without_replacement(h, f.size(), rng);
    } else {
      f = sample_without_replacement(f, h.size(), rng);
    }
  }

  // (value, is_hallucination), sorted by value.
  std::vector<std::pair<double, bool>> pooled;
  pooled.reserve(h.size() + f.size());
  for (double v : h) pooled.emplace_back(v, true);
  for (double v : f) pooled.emplace_back(v, false);
  std::sort(pooled.begin(), pooled.end());

  std::vector<double> distinct;
  for (const auto& [v, _] : pooled) {
    if (distinct.empty() || v != distinct.back()) distinct.push_back(v);
  }
  const std::size_t m = distinct.size();
  const double lo_gap = m > 1 ? (distinct[1] - distinct[0]) / 2 : 0.5;
  const double hi_gap = m > 1 ? (distinct[m - 1] - distinct[m - 2]) / 2 : 0.5;

  // Sweep the candidates left to right. Below every value all hallucinations
  // count as certain; passing value v moves its hallucinations out of the
  // error set and its factual answers into it.
  std::int64_t cost = static_cast<std::int64_t>(h.size());
  double best_t = distinct.front() - lo_gap;
  std::int64_t best_cost = cost;
  std::size_t idx = 0;
  for (std::size_t k = 0; k < m; ++k) {
    while (idx < pooled.size() && pooled[idx].first == distinct[k]) {
      cost += pooled[idx].second ? -1 : 1;
      ++idx;
    }
    const double t = k + 1 < m ? distinct[k] + (distinct[k + 1] - distinct[k]) / 2
                               : distinct[k] + hi_gap;
    if (cost < best_cost) {
      best_cost = cost;
      best_t = t;
    }
  }

  ThresholdResult r;
  r.metric_id = metric;
  r.t_star = best_t;
  r.misclassifications = best_cost;
  r.balancing = balancing;
  r.sample_seed = seed;
  r.candidates_evaluated = m + 1;
  r.n_hallucination = h.size();
  r.n_factual = f.size();
  return r;
}

std::vector<double> certainties_of(std::span<const ScoredRecord> records,
                                   OutcomeLabel::Kind kind, MetricId metric) {
  std::vector<double> out;
  for (const auto& r : records) {
    if (r.label.kind() != kind) continue;
    if (auto it = r.certainty.find(metric); it != r.certainty.end()) {
      out.push_back(it->second);
    }
  }
  return out;
}

std::vector<ChokeVerdict> classify_choke(std::span<const ScoredRecord> records,
                                         const ThresholdResult& threshold) {
  std::vector<ChokeVerdict> out;
  for (const auto& r : records) {
    if (!r.label.is_hallucination()) continue;
    auto it = r.certainty.find(threshold.metric_id);
    if (it == r.certainty.end()) {
      throw Error(ErrorCode::kMissingScore,
                  "hallucination " + r.question_id + " has no " +
                      metric_name(threshold.metric_id) + " score");
    }
    out.push_back({r.question_id, it->second, it->second > threshold.t_star});
  }
  return out;
}

namespace {

// Fraction of `sorted` values >= level.
double fraction_at_least(const std::vector<double>& sorted, double level) {
  const auto it = std::lower_bound(sorted.begin(), sorted.end(), level);
  return static_cast<double>(sorted.end() - it) /
         static_cast<double>(sorted.size());
}

}  // namespace

std::vector<CdfPoint> cdf_curves(std::span<const ScoredRecord> records,
                                 MetricId metric, std::size_t grid_size) {
  auto h = certainties_of(records, OutcomeLabel::Kind::kHallucination, metric);
  auto f = certainties_of(records, OutcomeLabel::Kind::kFactual, metric);
  if (h.empty() || f.empty()) {
    throw Error(ErrorCode::kEmptyClass,
                std::string("cdf needs hallucination and factual ") +
                    metric_name(metric) + " scores");
  }
  std::sort(h.begin(), h.end());
  std::sort(f.begin(), f.end());

  std::vector<double> grid;
  if (grid_size == 0) {
    std::merge(h.begin(), h.end(), f.begin(), f.end(), std::back_inserter(grid));
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  } else {
    const double lo = std::min(h.front(), f.front());
    const double hi = std::max(h.back(), f.back());
    grid.resize(grid_size);
    for (std::size_t i = 0; i < grid_size; ++i) {
      grid[i] = grid_size == 1 ? lo
                               : lo + (hi - lo) * static_cast<double>(i) /
                                          static_cast<double>(grid_size - 1);
    }
    grid.front() = lo;
    if (grid_size > 1) grid.back() = hi;
  }

  std::vector<CdfPoint> out;
  out.reserve(grid.size());
  for (double level : grid) {
    out.push_back({level, fraction_at_least(h, level), fraction_at_least(f, level)});
  }
  return out;
}

std::string cdf_to_csv(std::span<const CdfPoint> curve) {
  std::string out = "certainty_level,cum_frac_hallucination,cum_frac_factual\n";
  for (const auto& p : curve) {
    out += csv_row({format_double(p.certainty_level),
                    format_double(p.cum_frac_hallucination),
                    format_double(p.cum_frac_factual)});
  }
  return out;
}

double choke_fraction(std::span<const ChokeVerdict> verdicts) {
  if (verdicts.empty()) {
    throw Error(ErrorCode::kEmptyVerdicts, "no verdicts to summarize");
  }
  const auto n = std::count_if(verdicts.begin(), verdicts.end(),
                               [](const ChokeVerdict& v) { return v.is_choke; });
  return 100.0 * static_cast<double>(n) / static_cast<double>(verdicts.size());
}

}  // namespace choke
