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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "choke/config.h"
#include "choke/error.h"

namespace choke {

enum class Command {
  kValidate,
  kLabel,
  kScore,
  kThreshold,
  kDetect,
  kConsistency,
  kMitigate,
  kReport,
};

const char* command_name(Command c);
std::optional<Command> command_from_string(std::string_view name);

// Artifact file names inside the output directory.
namespace artifact {
inline constexpr const char* kValidation = "validation.json";
inline constexpr const char* kLabels = "labels.jsonl";
inline constexpr const char* kScores = "scores.jsonl";
inline constexpr const char* kThresholds = "thresholds.json";
inline constexpr const char* kVerdicts = "verdicts.jsonl";
inline constexpr const char* kConsistency = "consistency.json";
inline constexpr const char* kConsistencyTable = "consistency.csv";
inline constexpr const char* kMitigation = "mitigation.csv";
inline constexpr const char* kReport = "report.json";
inline constexpr const char* kCdfDir = "cdf";
}  // namespace artifact

struct PipelineOptions {
  Command command = Command::kReport;
  EngineConfig config;
  std::vector<std::string> inputs;  // JSONL corpora (validate, label, score)
  std::string out_dir = ".";
  bool shared_only = false;  // consistency on shared hallucinations only
};

// Runs one stage. Each stage reads its predecessors' artifacts from out_dir
// and writes its own there; every artifact embeds the config hash and seed.
//
//   validate    inputs -> validation.json (exit 1 if any violation)
//   label       inputs -> labels.jsonl
//   score       inputs -> scores.jsonl
//   threshold   labels + scores -> thresholds.json
//   detect      labels + scores + thresholds -> verdicts.jsonl
//   consistency verdicts -> consistency.json, consistency.csv
//   mitigate    labels + scores -> mitigation.csv
//   report      all of the above -> report.json, cdf/*.csv
//
// Returns 0 on success and 1 when validation found violations. Data problems
// throw choke::Error (missing-input, unwritable-output,
// upstream-artifact-missing, parse errors, ...).
int run_command(const PipelineOptions& options);

// Maps a thrown Error to the process exit status: 2 for invalid arguments,
// 1 for everything else.
int exit_status_for(const Error& e);

}  // namespace choke
