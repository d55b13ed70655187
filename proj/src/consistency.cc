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

#include "choke/consistency.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iterator>
#include <thread>

#include <boost/math/distributions/students_t.hpp>

#include "choke/csv.h"
#include "choke/error.h"
#include "choke/random.h"

namespace choke {

namespace {

// Jaccard as an exact ratio (intersection, union); (0, 0) for two empty sets.
struct Overlap {
  std::int64_t inter = 0;
  std::int64_t uni = 0;

  double percent() const {
    return uni == 0 ? 0.0
                    : 100.0 * static_cast<double>(inter) / static_cast<double>(uni);
  }
  // this >= other, exactly. Empty-vs-empty counts as 0.
  bool at_least(const Overlap& other) const {
    const std::int64_t a_den = uni == 0 ? 1 : uni;
    const std::int64_t b_den = other.uni == 0 ? 1 : other.uni;
    return inter * b_den >= other.inter * a_den;
  }
};

template <typename It>
Overlap overlap_sorted(It a_begin, It a_end, It b_begin, It b_end) {
  std::int64_t inter = 0;
  auto a = a_begin;
  auto b = b_begin;
  while (a != a_end && b != b_end) {
    if (*a < *b) {
      ++a;
    } else if (*b < *a) {
      ++b;
    } else {
      ++inter;
      ++a;
      ++b;
    }
  }
  const auto na = static_cast<std::int64_t>(std::distance(a_begin, a_end));
  const auto nb = static_cast<std::int64_t>(std::distance(b_begin, b_end));
  return {inter, na + nb - inter};
}

Overlap overlap(const IdSet& a, const IdSet& b) {
  return overlap_sorted(a.begin(), a.end(), b.begin(), b.end());
}

void check_drawn_from(const IdSet& choke, const IdSet& hall, const char* side) {
  if (choke.size() > hall.size()) {
    throw Error(ErrorCode::kSizeExceedsPopulation,
                std::string("CHOKE set ") + side +
                    " is larger than its hallucination set");
  }
  if (!std::includes(hall.begin(), hall.end(), choke.begin(), choke.end())) {
    throw Error(ErrorCode::kSubsetViolation,
                std::string("CHOKE set ") + side +
                    " is not a subset of its hallucination set");
  }
}

}  // namespace

double jaccard(const IdSet& a, const IdSet& b) { return overlap(a, b).percent(); }

nlohmann::json to_json(const ConsistencyReport& r) {
  return {{"jaccard_percent", r.jaccard_percent},
          {"permutation_mean_percent", r.permutation_mean_percent},
          {"p_value", r.p_value},
          {"n_permutations", r.n_permutations},
          {"n_at_least_observed", r.n_at_least_observed},
          {"shared_only", r.shared_only},
          {"empty_intersection", r.empty_intersection},
          {"seed", r.seed}};
}

ConsistencyReport permutation_test(const IdSet& hall_a, const IdSet& hall_b,
                                   const IdSet& choke_a, const IdSet& choke_b,
                                   std::int64_t n_permutations, std::uint64_t seed,
                                   unsigned threads) {
  if (n_permutations < 1) {
    throw Error(ErrorCode::kInvalidArgument, "n_permutations must be >= 1");
  }
  check_drawn_from(choke_a, hall_a, "A");
  check_drawn_from(choke_b, hall_b, "B");

  const Overlap observed = overlap(choke_a, choke_b);
  const std::vector<std::string> pop_a(hall_a.begin(), hall_a.end());
  const std::vector<std::string> pop_b(hall_b.begin(), hall_b.end());

  // Per-permutation results land in fixed slots; reduction order is fixed too.
  std::vector<Overlap> results(static_cast<std::size_t>(n_permutations));
  auto run_range = [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t i = begin; i < end; ++i) {
      auto rng = make_stream(seed, static_cast<std::uint64_t>(i));
      const auto draw_a = sample_without_replacement(pop_a, choke_a.size(), rng);
      const auto draw_b = sample_without_replacement(pop_b, choke_b.size(), rng);
      results[static_cast<std::size_t>(i)] =
          overlap_sorted(draw_a.begin(), draw_a.end(), draw_b.begin(), draw_b.end());
    }
  };

  threads = std::max(1u, std::min<unsigned>(
                             threads, static_cast<unsigned>(n_permutations)));
  if (threads == 1) {
    run_range(0, n_permutations);
  } else {
    std::vector<std::jthread> workers;
    const std::int64_t chunk = (n_permutations + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const std::int64_t begin = t * chunk;
      const std::int64_t end = std::min(n_permutations, begin + chunk);
      if (begin < end) workers.emplace_back(run_range, begin, end);
    }
  }

  ConsistencyReport r;
  r.jaccard_percent = observed.percent();
  r.n_permutations = n_permutations;
  r.seed = seed;
  double sum = 0.0;
  for (const auto& o : results) {
    sum += o.percent();
    if (o.at_least(observed)) ++r.n_at_least_observed;
  }
  r.permutation_mean_percent = sum / static_cast<double>(n_permutations);
  r.p_value = static_cast<double>(1 + r.n_at_least_observed) /
              static_cast<double>(1 + n_permutations);
  return r;
}

SharedInputs shared_filter(const IdSet& hall_a, const IdSet& hall_b,
                           const IdSet& choke_a, const IdSet& choke_b) {
  IdSet shared;
  std::set_intersection(hall_a.begin(), hall_a.end(), hall_b.begin(), hall_b.end(),
                        std::inserter(shared, shared.end()));
  auto restrict = [&](const IdSet& s) {
    IdSet out;
    std::set_intersection(s.begin(), s.end(), shared.begin(), shared.end(),
                          std::inserter(out, out.end()));
    return out;
  };
  SharedInputs out;
  out.hall_a = restrict(hall_a);
  out.hall_b = restrict(hall_b);
  out.choke_a = restrict(choke_a);
  out.choke_b = restrict(choke_b);
  out.empty_intersection = shared.empty();
  return out;
}

ConsistencyReport shared_permutation_test(const IdSet& hall_a, const IdSet& hall_b,
                                          const IdSet& choke_a, const IdSet& choke_b,
                                          std::int64_t n_permutations,
                                          std::uint64_t seed, unsigned threads) {
  const SharedInputs s = shared_filter(hall_a, hall_b, choke_a, choke_b);
  ConsistencyReport r = permutation_test(s.hall_a, s.hall_b, s.choke_a, s.choke_b,
                                         n_permutations, seed, threads);
  r.shared_only = true;
  r.empty_intersection = s.empty_intersection;
  return r;
}

namespace {

struct Moments {
  double mean = 0.0;
  double var = 0.0;  // unbiased
};

Moments moments(std::span<const double> xs) {
  Moments m;
  for (double x : xs) m.mean += x;
  m.mean /= static_cast<double>(xs.size());
  for (double x : xs) m.var += (x - m.mean) * (x - m.mean);
  m.var /= static_cast<double>(xs.size() - 1);
  return m;
}

}  // namespace

TTestResult welch_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) {
    throw Error(ErrorCode::kInsufficientData,
                "t-test needs at least two values per group");
  }
  const Moments ma = moments(a);
  const Moments mb = moments(b);
  if (ma.var == 0.0 && mb.var == 0.0) {
    throw Error(ErrorCode::kInsufficientData, "t-test needs nonzero variance");
  }
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double se_a = ma.var / na;
  const double se_b = mb.var / nb;
  const double se = se_a + se_b;

  TTestResult r;
  r.t_statistic = (ma.mean - mb.mean) / std::sqrt(se);
  r.degrees_of_freedom =
      se * se / (se_a * se_a / (na - 1) + se_b * se_b / (nb - 1));
  const boost::math::students_t dist(r.degrees_of_freedom);
  r.p_value = 2.0 * boost::math::cdf(boost::math::complement(
                        dist, std::fabs(r.t_statistic)));
  r.p_value = std::min(1.0, r.p_value);
  return r;
}

TTestResult first_token_length_ttest(std::span<const int> choke_lengths,
                                     std::span<const int> low_cert_lengths) {
  const std::vector<double> a(choke_lengths.begin(), choke_lengths.end());
  const std::vector<double> b(low_cert_lengths.begin(), low_cert_lengths.end());
  return welch_t_test(a, b);
}

std::string jaccard_table_to_csv(std::span<const JaccardTableRow> rows) {
  std::string out = csv_row({"model", "dataset", "metric", "random", "certain", "p_value"});
  for (const auto& r : rows) {
    out += csv_row({r.model, r.dataset, r.metric, format_double(r.random_percent),
                    format_double(r.certain_percent),
                    r.p_value ? format_double(*r.p_value) : std::string()});
  }
  return out;
}

namespace {

double parse_double(const std::string& s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(ErrorCode::kInvalidArgument, "not a number: '" + s + "'");
  }
  return v;
}

}  // namespace

std::vector<JaccardTableRow> jaccard_table_from_csv(std::string_view csv) {
  const auto rows = parse_csv(csv);
  if (rows.empty() || rows.front() != std::vector<std::string>{
                                          "model", "dataset", "metric", "random",
                                          "certain", "p_value"}) {
    throw Error(ErrorCode::kInvalidArgument, "unexpected Jaccard table header");
  }
  std::vector<JaccardTableRow> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& f = rows[i];
    if (f.size() != 6) {
      throw Error(ErrorCode::kInvalidArgument,
                  "Jaccard table row " + std::to_string(i) + " needs 6 fields");
    }
    JaccardTableRow r{f[0], f[1], f[2], parse_double(f[3]), parse_double(f[4]), {}};
    if (!f[5].empty()) r.p_value = parse_double(f[5]);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace choke
