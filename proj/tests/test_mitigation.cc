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

#include <random>

#include "choke/error.h"
#include "choke/mitigation.h"
#include "doctest.h"

using namespace choke;

namespace {

ScoredRecord rec(const std::string& id, OutcomeLabel label, double prob, double agree,
                 double pe_certainty) {
  return {id,
          label,
          {{MetricId::kProbability, prob},
           {MetricId::kSamplingAgreement, agree},
           {MetricId::kPredictiveEntropy, pe_certainty}},
          ""};
}

const MitigationReport& report_for(const std::vector<MitigationReport>& rs, MitigationMethod m) {
  for (const auto& r : rs) {
    if (r.method == m) return r;
  }
  FAIL("method missing");
  return rs.front();
}

}  // namespace

TEST_CASE("unmitigated_rate") {
  CHECK(unmitigated_rate(std::vector{0.9, 0.1}, 0.5) == 50.0);
  CHECK(unmitigated_rate(std::vector{0.1, 0.2}, 0.5) == 0.0);
  CHECK(unmitigated_rate(std::vector{0.6, 0.7}, 0.5) == 100.0);
  CHECK(unmitigated_rate(std::vector{0.5}, 0.5) == 0.0);
  CHECK_THROWS_AS(unmitigated_rate({}, 0.5), Error);
}

TEST_CASE("unmitigated_rate is nonincreasing in the threshold") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<double> s(40);
  for (auto& x : s) x = u(rng);
  double prev = 101.0;
  for (double t = -0.05; t < 1.05; t += 0.005) {
    const double r = unmitigated_rate(s, t);
    CHECK(r <= prev);
    prev = r;
  }
}

TEST_CASE("agreement saturated on hallucinations leaves more unmitigated than probability") {
  std::vector<ScoredRecord> rs;
  for (int i = 0; i < 10; ++i) {
    // Every hallucination has identical samples (agreement 0.9), factual
    // answers agree less, while probabilities separate the classes.
    rs.push_back(rec("h" + std::to_string(i), OutcomeLabel::hallucination(),
                     0.1 + 0.01 * i, 0.9, -0.5));
    rs.push_back(rec("f" + std::to_string(i), OutcomeLabel::factual(), 0.8 + 0.01 * i,
                     0.5 + 0.01 * i, -0.4));
  }
  const auto reports = compare_methods(rs, Balancing::kEqualSize, 0);
  REQUIRE(reports.size() == 3);
  CHECK(reports[0].method == MitigationMethod::kProbability);
  CHECK(reports[1].method == MitigationMethod::kSamplingAgreement);
  CHECK(reports[2].method == MitigationMethod::kPredictiveEntropy);
  const auto& prob = report_for(reports, MitigationMethod::kProbability);
  const auto& agree = report_for(reports, MitigationMethod::kSamplingAgreement);
  CHECK(prob.unmitigated_percent == 0.0);
  CHECK(agree.unmitigated_percent == 100.0);
  CHECK(agree.unmitigated_percent >= prob.unmitigated_percent);
  CHECK(prob.n_hallucinations == 10);
}

TEST_CASE("separable fixture mitigates everything") {
  std::vector<ScoredRecord> rs;
  for (int i = 0; i < 5; ++i) {
    rs.push_back(rec("h" + std::to_string(i), OutcomeLabel::hallucination(), 0.1, 0.1, -3.0));
    rs.push_back(rec("f" + std::to_string(i), OutcomeLabel::factual(), 0.9, 0.9, -0.1));
  }
  for (const auto& r : compare_methods(rs, Balancing::kEqualSize, 7)) {
    CHECK(r.unmitigated_percent == 0.0);
  }
}

TEST_CASE("a hallucination above every factual answer stays unmitigated") {
  const std::vector<ScoredRecord> rs = {rec("h", OutcomeLabel::hallucination(), 0.9, 0.9, -0.1),
                                        rec("f", OutcomeLabel::factual(), 0.1, 0.1, -3.0)};
  for (const auto& r : compare_methods(rs, Balancing::kEqualSize, 0)) {
    CHECK(r.unmitigated_percent == 100.0);
  }
}

TEST_CASE("unmitigated share equals the CHOKE fraction at the same threshold") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<ScoredRecord> rs;
  for (int i = 0; i < 50; ++i) {
    const auto label = i % 3 ? OutcomeLabel::factual() : OutcomeLabel::hallucination();
    rs.push_back(rec("r" + std::to_string(i), label, u(rng), u(rng), -u(rng)));
  }
  const auto reports = compare_methods(rs, Balancing::kEqualSize, 11);
  CHECK(compare_methods(rs, Balancing::kEqualSize, 11) == reports);
  for (const auto& r : reports) {
    ThresholdResult t;
    t.metric_id = metric_for(r.method);
    t.t_star = r.t_star;
    CHECK(r.unmitigated_percent == choke_fraction(classify_choke(rs, t)));
  }
}

TEST_CASE("missing mitigation metric") {
  std::vector<ScoredRecord> rs = {rec("h", OutcomeLabel::hallucination(), 0.9, 0.9, -0.1),
                                  rec("f", OutcomeLabel::factual(), 0.1, 0.1, -3.0)};
  rs[1].certainty.erase(MetricId::kPredictiveEntropy);
  try {
    compare_methods(rs, Balancing::kEqualSize, 0);
    FAIL("expected missing-metric");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kMissingMetric);
  }
  // Excluded records need no scores.
  rs[1].certainty[MetricId::kPredictiveEntropy] = -3.0;
  rs.push_back({"x", OutcomeLabel::excluded(ExclusionReason::kNoKnowledge), {}, ""});
  CHECK_NOTHROW(compare_methods(rs, Balancing::kEqualSize, 0));
}

TEST_CASE("mitigation csv") {
  const std::vector<MitigationReport> rs = {{MitigationMethod::kProbability, 0.45, 12.5, 8},
                                            {MitigationMethod::kSamplingAgreement, 0.6, 50, 8}};
  CHECK(mitigation_to_csv("Llama", rs) ==
        "model,method,t_star,unmitigated_percent\n"
        "Llama,probability,0.45,12.5\n"
        "Llama,sampling_agreement,0.6,50\n");
}
