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

#include <cstdint>
#include <string>
#include <vector>

#include "choke/certainty.h"
#include "choke/curation.h"
#include "choke/record.h"
#include "choke/threshold.h"
#include "json.hpp"

namespace choke {

// All tunables of a pipeline run. Loaded from a flat JSON object whose keys
// mirror the field names below (curation fields are flattened to top level).
struct EngineConfig {
  SkipList skip_tokens = default_skip_tokens();
  CurationConfig curation;
  std::string synonym_lexicon;  // path of a word -> [synonyms] JSON file
  std::vector<std::string> star_formatting_models;
  Balancing balancing = Balancing::kEqualSize;
  std::int64_t n_permutations = 10000;
  std::uint64_t seed = 0;
  std::vector<MetricId> metrics = {std::begin(kAllMetrics), std::end(kAllMetrics)};
  std::size_t grid_size = 200;
  std::string model_id = "model";  // used when records carry no model_id
  ParseMode parse_mode = ParseMode::kStrict;
  unsigned threads = 1;  // does not affect results; excluded from the hash
};

// Throws Error(kInvalidArgument) on any broken invariant.
void check_config(const EngineConfig& cfg);

// Reads the config file; relative lexicon paths resolve against its directory.
// Unknown keys are rejected.
EngineConfig load_config(const std::string& path);
EngineConfig config_from_json(const nlohmann::json& j, const std::string& base_dir = "");

// Canonical JSON form; loading it back yields an equivalent config.
nlohmann::json config_to_json(const EngineConfig& cfg);

// 16 hex digits of FNV-1a/64 over the canonical JSON dump.
std::string config_hash(const EngineConfig& cfg);

}  // namespace choke
