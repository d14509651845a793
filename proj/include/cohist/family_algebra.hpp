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

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cohist/histories.hpp"

namespace cohist {

struct FamilyOrderResult {
  bool is_coarse_graining = false;
  /// witness[k][i] = members of the fine slot k summing to coarse member i.
  std::vector<std::vector<std::vector<std::size_t>>> witness;
  /// First slot (on the merged time grid) where a coarse member is not a
  /// sum of fine members.
  std::optional<std::size_t> failing_slot;
  std::vector<Time> times;
};

/// Whether every member of every slot of `coarse` is a sum of members of the
/// matching slot of `fine`, both padded to their merged time grid.
FamilyOrderResult is_coarse_graining(const Family& coarse, const Family& fine,
                                     double tol);

/// Mutual coarse-graining: the two families have the same histories.
bool equivalent(const Family& a, const Family& b, double tol);

/// Atoms of the Boolean algebra generated by commuting projectors: the
/// nonzero products of P_i or 1 - P_i, in sign-pattern order (P_i before
/// 1 - P_i, first projector most significant). Throws NonCommutingSlot with
/// slot index 0.
Decomposition slot_atoms(std::span<const Projector> projectors,
                         std::span<const std::string> labels, double tol);

/// slot_atoms per slot; NonCommutingSlot carries the slot index.
std::vector<Decomposition> atoms_of(
    const std::vector<std::vector<Projector>>& per_slot, double tol);

/// Smallest family containing every history of `histories`.
Family generated_family(std::span<const History> histories, double tol);

/// Slot-wise atoms of the union of both families' members.
Family common_refinement(const Family& a, const Family& b, double tol);

struct CompatibilityResult {
  enum class Reason { Compatible, NonCommutingSlot, RefinementInconsistent };
  bool compatible = false;
  Reason reason = Reason::Compatible;
  std::optional<Family> refined_family;
  /// Slot of the first non-commuting pair when reason is NonCommutingSlot.
  std::optional<std::size_t> slot;
  /// Decoherence residual of the refinement when it could be built.
  double refinement_max_off_diagonal_re = 0.0;
};

std::string to_string(CompatibilityResult::Reason reason);

/// Any family containing both inputs refines them slot-wise, hence refines
/// their minimal common refinement; weak decoherence passes to
/// coarse-grainings, so the inputs are compatible exactly when that minimal
/// refinement exists and is weakly decoherent. Throws InconsistentFamily if
/// either input is itself inconsistent.
CompatibilityResult are_compatible(const Family& a, const Family& b,
                                   const DensityMatrix& rho, double tol);

}  // namespace cohist
