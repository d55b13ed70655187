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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace choke {

enum class ErrorCode {
  kMalformedJson,
  kSchemaViolation,
  kEmptyGeneration,
  kInsufficientAlternatives,
  kOracleFailure,
  kEmptySamples,
  kZeroTotalMass,
  kEmptySet,
  kMissingScore,
  kEmptyClass,
  kEmptyVerdicts,
  kSubsetViolation,
  kSizeExceedsPopulation,
  kInsufficientData,
  kEmptyScores,
  kMissingMetric,
  kInvalidArgument,
  kMissingInput,
  kUnwritableOutput,
  kUpstreamArtifactMissing,
};

const char* error_code_name(ErrorCode code);

// Every engine failure carries a machine-checkable code. Parse errors also
// carry the 1-based line number and, for schema violations, the field path.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::size_t line = 0,
        std::string field = {})
      : std::runtime_error(message),
        code_(code),
        line_(line),
        field_(std::move(field)) {}

  ErrorCode code() const { return code_; }
  std::size_t line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  ErrorCode code_;
  std::size_t line_;
  std::string field_;
};

}  // namespace choke
