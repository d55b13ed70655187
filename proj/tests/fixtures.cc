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

#include "fixtures.h"

#include <cmath>
#include <cstdio>
#include <limits>

namespace choke::testing {

namespace {

double safe_log(double p) {
  return p > 0 ? std::log(p) : -std::numeric_limits<double>::infinity();
}

std::string qid(int i) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "q%03d", i);
  return buf;
}

}  // namespace

TokenStep make_step(const Tok& t) {
  TokenStep s;
  s.token_text = t.text;
  s.logprob = safe_log(t.p);
  Alternative self{t.text, s.logprob};
  Alternative other{"<alt>", safe_log(t.alt_p)};
  if (other.logprob > self.logprob) {
    s.top_alternatives = {other, self};
  } else {
    s.top_alternatives = {self, other};
  }
  return s;
}

namespace {

Generation build(std::vector<Tok> tokens, DecodeMode mode, double temperature) {
  Generation g;
  g.decode_mode = mode;
  g.temperature = mode == DecodeMode::kSampled ? temperature : 0.0;
  for (const auto& t : tokens) {
    g.text += t.text;
    g.token_steps.push_back(make_step(t));
  }
  return g;
}

}  // namespace

Generation greedy(std::vector<Tok> tokens) {
  return build(std::move(tokens), DecodeMode::kGreedy, 0.0);
}

Generation sampled(std::vector<Tok> tokens, double temperature, long long seed) {
  Generation g = build(std::move(tokens), DecodeMode::kSampled, temperature);
  g.rng_seed = seed;
  return g;
}

Generation sampled_text(const std::string& text, double p, double temperature) {
  return sampled({{text, p, p >= 0.5 ? (1 - p) / 2 : std::min(0.9, 1 - p)}},
                 temperature);
}

QARecord make_record(const std::string& id, std::vector<std::string> gold,
                     const std::string& probe_text, Generation setting_greedy,
                     std::vector<Generation> samples, const std::string& setting) {
  QARecord r;
  r.question_id = id;
  r.dataset_id = "triviaqa";
  r.model_id = "fixture-7b";
  r.setting_id = SettingId::from_string(setting);
  r.question_text = "question " + id + "?";
  r.prompt_text = "question: " + r.question_text + "\nanswer:";
  r.gold_answers = std::move(gold);
  r.knowledge_probe.push_back(greedy({{probe_text, 0.9, 0.05}}));
  for (int i = 0; i < 5; ++i) {
    Generation g = sampled({{probe_text, 0.8, 0.1}}, 0.5, 100 + i);
    r.knowledge_probe.push_back(std::move(g));
  }
  r.setting_greedy = std::move(setting_greedy);
  r.setting_samples = std::move(samples);
  return r;
}

namespace {

// 10 samples at temperature 1 plus one at 0.1, all answering `text`, or a
// spread of distinct answers when `spread` is set.
std::vector<Generation> sample_set(const std::string& text, double p, bool spread) {
  std::vector<Generation> out;
  for (int i = 0; i < 10; ++i) {
    const std::string t = spread && i % 2 ? text + "-" + std::to_string(i) : text;
    out.push_back(sampled_text(t, spread ? p / 2 : p, 1.0));
  }
  out.push_back(sampled_text(text, p, 0.1));
  return out;
}

Generation answer(const std::string& word, double p) {
  return greedy({{"The", 0.99, 0.001},
                 {" answer", 0.98, 0.01},
                 {" is", 0.97, 0.01},
                 {" " + word, p, p >= 0.5 ? (1 - p) / 2 : std::min(0.9, 1 - p)}});
}

}  // namespace

std::vector<QARecord> planted_corpus(const std::string& setting) {
  std::vector<QARecord> out;
  for (int i = 0; i < 100; ++i) {
    const std::string gold = "gold" + std::to_string(i);
    const std::string wrong = "wrong" + std::to_string(i);
    QARecord r;
    if (i < 40) {
      r = make_record(qid(i), {gold}, gold, answer(gold, 0.6), sample_set(gold, 0.6, false),
                      setting);
      r.knowledge_probe.back().text = "unsure";
      r.knowledge_probe.back().token_steps = {make_step({"unsure", 0.8, 0.1})};
    } else if (i < 80) {
      const double p = 0.60 + 0.00125 * (i - 40);
      r = make_record(qid(i), {gold}, gold, answer(gold, p), sample_set(gold, p, false),
                      setting);
    } else if (i < 92) {
      const double p = 0.05 + 0.02 * (i - 80);
      r = make_record(qid(i), {gold}, gold, answer(wrong, p), sample_set(wrong, p, true),
                      setting);
    } else {
      const double p = 0.70 + 0.03 * (i - 92);
      r = make_record(qid(i), {gold}, gold, answer(wrong, p), sample_set(wrong, p, false),
                      setting);
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<std::string> planted_choke_ids() {
  std::vector<std::string> out;
  for (int i = 92; i < 100; ++i) out.push_back(qid(i));
  return out;
}

}  // namespace choke::testing
