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

#include <string>
#include <string_view>
#include <vector>

namespace choke {

// Shortest decimal form that parses back to the same double.
std::string format_double(double value);

// Minimal CSV: comma separated, fields quoted when they contain a comma,
// quote or newline. Lines starting with '#' are comments.
std::string csv_escape(std::string_view field);
std::string csv_row(const std::vector<std::string>& fields);

// Parses a document into rows, skipping comment and blank lines.
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

}  // namespace choke
