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

#include "choke/record.h"

#include <algorithm>

#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <sstream>

#include "choke/error.h"

namespace choke {

using nlohmann::json;

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedJson: return "malformed-json";
    case ErrorCode::kSchemaViolation: return "schema-violation";
    case ErrorCode::kEmptyGeneration: return "empty-generation";
    case ErrorCode::kInsufficientAlternatives: return "insufficient-alternatives";
    case ErrorCode::kOracleFailure: return "oracle-failure";
    case ErrorCode::kEmptySamples: return "empty-samples";
    case ErrorCode::kZeroTotalMass: return "zero-total-mass";
    case ErrorCode::kEmptySet: return "empty-set";
    case ErrorCode::kMissingScore: return "missing-score";
    case ErrorCode::kEmptyClass: return "empty-class";
    case ErrorCode::kEmptyVerdicts: return "empty-verdicts";
    case ErrorCode::kSubsetViolation: return "subset-violation";
    case ErrorCode::kSizeExceedsPopulation: return "size-exceeds-population";
    case ErrorCode::kInsufficientData: return "insufficient-data";
    case ErrorCode::kEmptyScores: return "empty-scores";
    case ErrorCode::kMissingMetric: return "missing-metric";
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kMissingInput: return "missing-input";
    case ErrorCode::kUnwritableOutput: return "unwritable-output";
    case ErrorCode::kUpstreamArtifactMissing: return "upstream-artifact-missing";
  }
  return "unknown";
}

double Generation::sequence_logprob() const {
  double total = 0.0;
  for (const auto& step : token_steps) total += step.logprob;
  return total;
}

SettingId SettingId::from_string(std::string_view name) {
  SettingId id;
  if (name == "base") {
    id.kind_ = Kind::kBase;
  } else if (name == "child") {
    id.kind_ = Kind::kChild;
  } else if (name == "alice_bob") {
    id.kind_ = Kind::kAliceBob;
  } else {
    id.kind_ = Kind::kCustom;
    id.custom_ = std::string(name);
  }
  return id;
}

std::string SettingId::str() const {
  switch (kind_) {
    case Kind::kBase: return "base";
    case Kind::kChild: return "child";
    case Kind::kAliceBob: return "alice_bob";
    case Kind::kCustom: return custom_;
  }
  return custom_;
}

const char* exclusion_reason_name(ExclusionReason reason) {
  switch (reason) {
    case ExclusionReason::kNegation: return "negation";
    case ExclusionReason::kSynonym: return "synonym";
    case ExclusionReason::kStemOverlap: return "stem_overlap";
    case ExclusionReason::kEditDistance: return "edit_distance";
    case ExclusionReason::kInitialWord: return "initial_word";
    case ExclusionReason::kFormatting: return "formatting";
    case ExclusionReason::kNoKnowledge: return "no_knowledge";
    case ExclusionReason::kOther: return "other";
  }
  return "other";
}

ExclusionReason exclusion_reason_from_string(std::string_view name) {
  static const std::map<std::string_view, ExclusionReason> kByName = {
      {"negation", ExclusionReason::kNegation},
      {"synonym", ExclusionReason::kSynonym},
      {"stem_overlap", ExclusionReason::kStemOverlap},
      {"edit_distance", ExclusionReason::kEditDistance},
      {"initial_word", ExclusionReason::kInitialWord},
      {"formatting", ExclusionReason::kFormatting},
      {"no_knowledge", ExclusionReason::kNoKnowledge},
      {"other", ExclusionReason::kOther},
  };
  auto it = kByName.find(name);
  if (it == kByName.end()) {
    throw Error(ErrorCode::kInvalidArgument,
                "unknown exclusion reason '" + std::string(name) + "'");
  }
  return it->second;
}

const char* outcome_kind_name(OutcomeLabel::Kind kind) {
  switch (kind) {
    case OutcomeLabel::Kind::kFactual: return "factual";
    case OutcomeLabel::Kind::kHallucination: return "hallucination";
    case OutcomeLabel::Kind::kExcluded: return "excluded";
  }
  return "excluded";
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

[[noreturn]] void schema_error(std::size_t line, const std::string& field,
                               const std::string& what) {
  std::ostringstream msg;
  msg << "line " << line << ": schema violation at '" << field << "': " << what;
  throw Error(ErrorCode::kSchemaViolation, msg.str(), line, field);
}

const json& require(const json& obj, const char* key, const std::string& path,
                    std::size_t line) {
  auto it = obj.find(key);
  const std::string field = path.empty() ? key : path + "." + key;
  if (it == obj.end()) schema_error(line, field, "missing");
  return *it;
}

std::string get_string(const json& obj, const char* key,
                       const std::string& path, std::size_t line) {
  const json& v = require(obj, key, path, line);
  if (!v.is_string()) {
    schema_error(line, path.empty() ? key : path + "." + key,
                 "expected string");
  }
  return v.get<std::string>();
}

// Numbers pass through as 64-bit doubles; null stands for -inf.
double get_logprob(const json& v, const std::string& field, std::size_t line) {
  if (v.is_null()) return -std::numeric_limits<double>::infinity();
  if (!v.is_number()) schema_error(line, field, "expected number or null");
  return v.get<double>();
}

json logprob_to_json(double logprob) {
  if (std::isinf(logprob) && logprob < 0) return nullptr;
  return logprob;
}

const json& require_array(const json& obj, const char* key,
                          const std::string& path, std::size_t line) {
  const json& v = require(obj, key, path, line);
  if (!v.is_array()) {
    schema_error(line, path.empty() ? key : path + "." + key, "expected array");
  }
  return v;
}

TokenStep token_step_from_json(const json& j, const std::string& path,
                               std::size_t line) {
  if (!j.is_object()) schema_error(line, path, "expected object");
  TokenStep step;
  step.token_text = get_string(j, "token_text", path, line);
  step.logprob = get_logprob(require(j, "logprob", path, line),
                             path + ".logprob", line);
  const json& alts = require_array(j, "top_alternatives", path, line);
  for (std::size_t i = 0; i < alts.size(); ++i) {
    const std::string field =
        path + ".top_alternatives[" + std::to_string(i) + "]";
    const json& pair = alts[i];
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_string()) {
      schema_error(line, field, "expected [string, number]");
    }
    step.top_alternatives.push_back(
        {pair[0].get<std::string>(), get_logprob(pair[1], field, line)});
  }
  return step;
}

}  // namespace

Generation generation_from_json(const json& j, const std::string& path,
                                std::size_t line) {
  if (!j.is_object()) schema_error(line, path, "expected object");
  Generation g;
  g.text = get_string(j, "text", path, line);
  const std::string mode = get_string(j, "decode_mode", path, line);
  if (mode == "greedy") {
    g.decode_mode = DecodeMode::kGreedy;
  } else if (mode == "sampled") {
    g.decode_mode = DecodeMode::kSampled;
  } else {
    schema_error(line, path + ".decode_mode", "expected greedy|sampled");
  }
  if (auto it = j.find("temperature"); it != j.end() && !it->is_null()) {
    if (!it->is_number()) {
      schema_error(line, path + ".temperature", "expected number");
    }
    g.temperature = it->get<double>();
  }
  if (auto it = j.find("rng_seed"); it != j.end() && !it->is_null()) {
    if (!it->is_number_integer()) {
      schema_error(line, path + ".rng_seed", "expected integer");
    }
    g.rng_seed = it->get<std::int64_t>();
  }
  const json& steps = require_array(j, "token_steps", path, line);
  g.token_steps.reserve(steps.size());
  for (std::size_t i = 0; i < steps.size(); ++i) {
    g.token_steps.push_back(token_step_from_json(
        steps[i], path + ".token_steps[" + std::to_string(i) + "]", line));
  }
  return g;
}

json generation_to_json(const Generation& g) {
  json j;
  j["text"] = g.text;
  j["decode_mode"] = g.decode_mode == DecodeMode::kGreedy ? "greedy" : "sampled";
  if (g.decode_mode == DecodeMode::kSampled) j["temperature"] = g.temperature;
  j["rng_seed"] = g.rng_seed ? json(*g.rng_seed) : json(nullptr);
  json steps = json::array();
  for (const auto& step : g.token_steps) {
    json alts = json::array();
    for (const auto& alt : step.top_alternatives) {
      alts.push_back(json::array({alt.token_text, logprob_to_json(alt.logprob)}));
    }
    steps.push_back({{"token_text", step.token_text},
                     {"logprob", logprob_to_json(step.logprob)},
                     {"top_alternatives", std::move(alts)}});
  }
  j["token_steps"] = std::move(steps);
  return j;
}

QARecord record_from_json(const json& j, std::size_t line) {
  if (!j.is_object()) schema_error(line, "", "expected object");
  QARecord r;
  r.question_id = get_string(j, "question_id", "", line);
  r.dataset_id = get_string(j, "dataset_id", "", line);
  r.setting_id = SettingId::from_string(get_string(j, "setting_id", "", line));
  r.question_text = get_string(j, "question_text", "", line);
  r.prompt_text = get_string(j, "prompt_text", "", line);
  if (auto it = j.find("model_id"); it != j.end() && it->is_string()) {
    r.model_id = it->get<std::string>();
  }

  const json& golds = require_array(j, "gold_answers", "", line);
  for (std::size_t i = 0; i < golds.size(); ++i) {
    if (!golds[i].is_string()) {
      schema_error(line, "gold_answers[" + std::to_string(i) + "]",
                   "expected string");
    }
    r.gold_answers.push_back(golds[i].get<std::string>());
  }

  const json& probes = require_array(j, "knowledge_probe", "", line);
  for (std::size_t i = 0; i < probes.size(); ++i) {
    r.knowledge_probe.push_back(generation_from_json(
        probes[i], "knowledge_probe[" + std::to_string(i) + "]", line));
  }
  r.setting_greedy =
      generation_from_json(require(j, "setting_greedy", "", line),
                           "setting_greedy", line);
  const json& samples = require_array(j, "setting_samples", "", line);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    r.setting_samples.push_back(generation_from_json(
        samples[i], "setting_samples[" + std::to_string(i) + "]", line));
  }

  if (auto it = j.find("cluster_ids"); it != j.end() && !it->is_null()) {
    if (!it->is_array()) schema_error(line, "cluster_ids", "expected array");
    std::vector<int> ids;
    for (const auto& v : *it) {
      if (!v.is_number_integer()) {
        schema_error(line, "cluster_ids", "expected integers");
      }
      ids.push_back(v.get<int>());
    }
    r.cluster_ids = std::move(ids);
  }
  return r;
}

json record_to_json(const QARecord& r) {
  json j;
  j["question_id"] = r.question_id;
  j["dataset_id"] = r.dataset_id;
  if (!r.model_id.empty()) j["model_id"] = r.model_id;
  j["setting_id"] = r.setting_id.str();
  j["question_text"] = r.question_text;
  j["prompt_text"] = r.prompt_text;
  j["gold_answers"] = r.gold_answers;
  json probes = json::array();
  for (const auto& g : r.knowledge_probe) probes.push_back(generation_to_json(g));
  j["knowledge_probe"] = std::move(probes);
  j["setting_greedy"] = generation_to_json(r.setting_greedy);
  json samples = json::array();
  for (const auto& g : r.setting_samples) samples.push_back(generation_to_json(g));
  j["setting_samples"] = std::move(samples);
  if (r.cluster_ids) j["cluster_ids"] = *r.cluster_ids;
  return j;
}

ParseResult parse_records(std::istream& in, ParseMode mode) {
  ParseResult result;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      json j;
      try {
        j = json::parse(line);
      } catch (const json::parse_error& e) {
        throw Error(ErrorCode::kMalformedJson,
                    "line " + std::to_string(line_no) +
                        ": malformed json: " + e.what(),
                    line_no);
      }
      result.records.push_back(record_from_json(j, line_no));
    } catch (const Error& e) {
      if (mode == ParseMode::kStrict) throw;
      result.skipped.push_back({e.line(), e.field(), e.what()});
    }
  }
  return result;
}

ParseResult parse_records(std::string_view text, ParseMode mode) {
  std::istringstream in{std::string(text)};
  return parse_records(in, mode);
}

std::string serialize_records(const std::vector<QARecord>& records) {
  std::string out;
  for (const auto& r : records) {
    out += record_to_json(r).dump();
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Validation

namespace {

void validate_generation(const Generation& g, const std::string& path,
                         std::vector<Violation>& out) {
  if (g.decode_mode == DecodeMode::kSampled && !(g.temperature > 0.0)) {
    out.push_back({path + ".temperature", "sampled mode requires temperature > 0"});
  }
  std::string concat;
  for (std::size_t i = 0; i < g.token_steps.size(); ++i) {
    const TokenStep& step = g.token_steps[i];
    const std::string sp = path + ".token_steps[" + std::to_string(i) + "]";
    concat += step.token_text;
    if (!(step.logprob <= 0.0)) {
      out.push_back({sp + ".logprob", "logprob ≤ 0"});
    }
    const auto& alts = step.top_alternatives;
    if (alts.size() < 2) {
      out.push_back({sp + ".top_alternatives", "at least 2 alternatives"});
    }
    for (std::size_t k = 1; k < alts.size(); ++k) {
      if (!(alts[k - 1].logprob > alts[k].logprob)) {
        out.push_back({sp + ".top_alternatives",
                       "alternatives strictly descending in logprob"});
        break;
      }
    }
    bool found = false;
    for (const auto& alt : alts) {
      if (alt.token_text == step.token_text && alt.logprob == step.logprob) {
        found = true;
        break;
      }
    }
    if (!found) {
      out.push_back({sp, "emitted token among top_alternatives"});
    }
  }
  if (concat != g.text) {
    out.push_back({path + ".text", "text equals concatenated token_text"});
  }
}

}  // namespace

std::vector<Violation> validate_record(const QARecord& r) {
  std::vector<Violation> out;
  if (r.gold_answers.empty()) {
    out.push_back({"gold_answers", "gold_answers nonempty"});
  }
  std::size_t greedy = 0;
  for (std::size_t i = 0; i < r.knowledge_probe.size(); ++i) {
    const Generation& g = r.knowledge_probe[i];
    if (g.decode_mode == DecodeMode::kGreedy) ++greedy;
    validate_generation(g, "knowledge_probe[" + std::to_string(i) + "]", out);
  }
  if (greedy != 1) {
    out.push_back({"knowledge_probe", "exactly one greedy"});
  }
  if (r.setting_greedy.decode_mode != DecodeMode::kGreedy) {
    out.push_back({"setting_greedy.decode_mode", "setting_greedy is greedy"});
  }
  validate_generation(r.setting_greedy, "setting_greedy", out);
  for (std::size_t i = 0; i < r.setting_samples.size(); ++i) {
    const Generation& g = r.setting_samples[i];
    const std::string path = "setting_samples[" + std::to_string(i) + "]";
    if (g.decode_mode != DecodeMode::kSampled) {
      out.push_back({path + ".decode_mode", "setting_samples all sampled"});
    }
    validate_generation(g, path, out);
  }
  if (r.cluster_ids) {
    const auto& ids = *r.cluster_ids;
    if (ids.size() != r.setting_samples.size()) {
      out.push_back({"cluster_ids", "one cluster id per setting sample"});
    }
    const int top = ids.empty() ? -1 : *std::max_element(ids.begin(), ids.end());
    std::vector<bool> used(static_cast<std::size_t>(std::max(top + 1, 0)), false);
    bool ok = true;
    for (int id : ids) {
      if (id < 0) {
        ok = false;
        break;
      }
      used[static_cast<std::size_t>(id)] = true;
    }
    if (!ok || std::find(used.begin(), used.end(), false) != used.end()) {
      out.push_back({"cluster_ids", "ids contiguous in [0, C)"});
    }
  }
  return out;
}

std::vector<Violation> validate_corpus(const std::vector<QARecord>& records) {
  std::vector<Violation> out;
  std::map<std::string, std::size_t> seen;
  for (const auto& r : records) {
    for (auto& v : validate_record(r)) {
      out.push_back({r.question_id + ":" + v.path, std::move(v.message)});
    }
    if (++seen[r.question_id] == 2) {
      out.push_back({r.question_id + ":question_id", "question_id unique"});
    }
  }
  return out;
}

}  // namespace choke
