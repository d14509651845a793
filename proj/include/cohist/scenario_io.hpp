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

#include "cohist/inference.hpp"
#include "cohist/scenario.hpp"
#include "json.hpp"

namespace cohist {

using ordered_json = nlohmann::ordered_json;

/// Malformed or unresolvable scenario document.
class ScenarioError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// Parses a JSON scenario document. Sections are read in the order dim, tol,
/// vectors, projectors, decompositions, histories, families, rho, search,
/// simulation; a name may only refer to entries defined earlier.
Scenario parse_scenario(const ordered_json& doc);
Scenario parse_scenario_text(std::string_view text);
Scenario load_scenario(const std::string& path);

/// [re, im].
ordered_json complex_to_json(Complex z);
/// Row-major rows of [re, im] pairs.
ordered_json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const ordered_json& j, int dim);

/// Scenario fragment defining E0, E1, F1, E2 by explicit matrices together
/// with h0, h1, h2 and the families C1, C2 they generate.
ordered_json certificate_fragment(const ContraryInferenceCertificate& c);

}  // namespace cohist
