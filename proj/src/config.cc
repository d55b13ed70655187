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

#include "choke/config.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include "choke/error.h"

namespace choke {

namespace fs = std::filesystem;
using nlohmann::json;

void check_config(const EngineConfig& cfg) {
  check_config(cfg.curation);
  if (cfg.n_permutations < 1) {
    throw Error(ErrorCode::kInvalidArgument, "n_permutations must be >= 1");
  }
  if (cfg.metrics.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "metrics must be nonempty");
  }
}

namespace {

[[noreturn]] void bad_key(const std::string& key, const std::string& what) {
  throw Error(ErrorCode::kInvalidArgument, "config key '" + key + "': " + what);
}

std::vector<std::string> string_list(const json& v, const std::string& key) {
  if (!v.is_array()) bad_key(key, "expected array of strings");
  std::vector<std::string> out;
  for (const auto& s : v) {
    if (!s.is_string()) bad_key(key, "expected array of strings");
    out.push_back(s.get<std::string>());
  }
  return out;
}

Fraction parse_fraction(const json& v, const std::string& key) {
  if (v.is_string()) {
    long long num = 0, den = 0;
    char tail = 0;
    if (std::sscanf(v.get<std::string>().c_str(), "%lld/%lld%c", &num, &den,
                    &tail) == 2 &&
        den > 0) {
      return {num, den};
    }
    bad_key(key, "expected number or \"num/den\"");
  }
  if (!v.is_number()) bad_key(key, "expected number or \"num/den\"");
  constexpr std::int64_t kScale = 1000000;
  return {static_cast<std::int64_t>(std::llround(v.get<double>() * kScale)), kScale};
}

}  // namespace

EngineConfig config_from_json(const json& j, const std::string& base_dir) {
  if (!j.is_object()) {
    throw Error(ErrorCode::kInvalidArgument, "config must be a JSON object");
  }
  EngineConfig cfg;
  for (const auto& [key, v] : j.items()) {
    if (key == "skip_tokens") {
      const auto list = string_list(v, key);
      cfg.skip_tokens = SkipList(list.begin(), list.end());
    } else if (key == "negation_prefixes") {
      cfg.curation.negation_prefixes = string_list(v, key);
    } else if (key == "synonym_lexicon") {
      if (!v.is_string()) bad_key(key, "expected path string");
      fs::path p = v.get<std::string>();
      if (!p.empty() && p.is_relative() && !base_dir.empty()) {
        p = fs::path(base_dir) / p;
      }
      cfg.synonym_lexicon = p.string();
    } else if (key == "stem_overlap_threshold") {
      cfg.curation.stem_overlap_threshold = parse_fraction(v, key);
    } else if (key == "edit_distance_min") {
      if (!v.is_number_integer()) bad_key(key, "expected integer");
      cfg.curation.edit_distance_min = v.get<int>();
    } else if (key == "numeric_exclusion_words") {
      const auto list = string_list(v, key);
      cfg.curation.numeric_exclusion_words = {list.begin(), list.end()};
    } else if (key == "formatting_marker") {
      if (!v.is_string()) bad_key(key, "expected string");
      cfg.curation.formatting_marker = v.get<std::string>();
    } else if (key == "star_formatting_models") {
      cfg.star_formatting_models = string_list(v, key);
    } else if (key == "balancing") {
      if (!v.is_string()) bad_key(key, "expected equal_size|natural_ratio");
      cfg.balancing = balancing_from_string(v.get<std::string>());
    } else if (key == "n_permutations") {
      if (!v.is_number_integer()) bad_key(key, "expected integer");
      cfg.n_permutations = v.get<std::int64_t>();
    } else if (key == "seed") {
      if (!v.is_number_integer()) bad_key(key, "expected integer");
      cfg.seed = v.get<std::uint64_t>();
    } else if (key == "metrics") {
      cfg.metrics.clear();
      for (const auto& name : string_list(v, key)) {
        cfg.metrics.push_back(metric_from_string(name));
      }
    } else if (key == "grid_size") {
      if (!v.is_number_unsigned()) bad_key(key, "expected non-negative integer");
      cfg.grid_size = v.get<std::size_t>();
    } else if (key == "model_id") {
      if (!v.is_string()) bad_key(key, "expected string");
      cfg.model_id = v.get<std::string>();
    } else if (key == "strict") {
      if (!v.is_boolean()) bad_key(key, "expected boolean");
      cfg.parse_mode = v.get<bool>() ? ParseMode::kStrict : ParseMode::kLenient;
    } else if (key == "threads") {
      if (!v.is_number_unsigned()) bad_key(key, "expected non-negative integer");
      cfg.threads = std::max(1u, v.get<unsigned>());
    } else {
      bad_key(key, "unknown key");
    }
  }
  if (!cfg.synonym_lexicon.empty()) {
    cfg.curation.synonym_provider =
        SynonymLexicon::from_json_file(cfg.synonym_lexicon).provider();
  }
  check_config(cfg);
  return cfg;
}

EngineConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kMissingInput, "cannot open config " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kInvalidArgument, path + ": " + e.what());
  }
  return config_from_json(j, fs::path(path).parent_path().string());
}

json config_to_json(const EngineConfig& cfg) {
  json metrics = json::array();
  for (MetricId m : cfg.metrics) metrics.push_back(metric_name(m));
  const Fraction& t = cfg.curation.stem_overlap_threshold;
  return {
      {"skip_tokens", std::vector<std::string>(cfg.skip_tokens.begin(),
                                               cfg.skip_tokens.end())},
      {"negation_prefixes", cfg.curation.negation_prefixes},
      {"synonym_lexicon", cfg.synonym_lexicon},
      {"stem_overlap_threshold", std::to_string(t.num) + "/" + std::to_string(t.den)},
      {"edit_distance_min", cfg.curation.edit_distance_min},
      {"numeric_exclusion_words",
       std::vector<std::string>(cfg.curation.numeric_exclusion_words.begin(),
                                cfg.curation.numeric_exclusion_words.end())},
      {"formatting_marker", cfg.curation.formatting_marker},
      {"star_formatting_models", cfg.star_formatting_models},
      {"balancing", balancing_name(cfg.balancing)},
      {"n_permutations", cfg.n_permutations},
      {"seed", cfg.seed},
      {"metrics", std::move(metrics)},
      {"grid_size", cfg.grid_size},
      {"model_id", cfg.model_id},
      {"strict", cfg.parse_mode == ParseMode::kStrict},
  };
}

std::string config_hash(const EngineConfig& cfg) {
  const std::string canonical = config_to_json(cfg).dump();
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace choke
