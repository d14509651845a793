// Copyright 2026 The cohist Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
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

#include "cohist/scenario_io.hpp"

namespace cohist {

/// Outcome of one CLI command.
struct Report {
  std::string command;
  std::vector<std::string> arguments;
  /// Effective tol and seed.
  ordered_json settings = ordered_json::object();
  /// "sha256:<hex>" over the scenario bytes and the command line.
  std::string inputs_digest;
  /// One-line verdict for human output.
  std::string summary;
  ordered_json results = ordered_json::object();
  std::vector<std::string> warnings;
  int exit_status = 0;

  bool operator==(const Report&) const = default;
};

/// Round to `digits` significant digits through decimal text.
double round_significant(double x, int digits);

/// Copy of j with every floating-point number rounded.
ordered_json round_numbers(const ordered_json& j, int digits);

ordered_json to_json(const Report& r);
/// Throws ScenarioError on a malformed report.
Report report_from_json(const ordered_json& j);

/// Pretty JSON, numbers at 12 significant digits, trailing newline.
std::string render_machine(const Report& r);
/// Indented text, numbers at 6 significant digits.
std::string render_human(const Report& r);

std::string sha256_hex(std::string_view data);

}  // namespace cohist
