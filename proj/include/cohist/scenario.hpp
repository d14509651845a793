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
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cohist/error.hpp"
#include "cohist/histories.hpp"

namespace cohist {

class UnknownName : public Error {
 public:
  UnknownName(std::string_view kind, std::string_view name)
      : Error("unknown " + std::string(kind) + " '" + std::string(name) + "'") {}
};

/// Insertion-ordered name -> value table.
template <class T>
class NamedTable {
 public:
  explicit NamedTable(std::string kind) : kind_(std::move(kind)) {}

  void add(std::string name, T value) {
    if (contains(name)) {
      throw InvalidArgument("duplicate " + kind_ + " '" + name + "'");
    }
    entries_.emplace_back(std::move(name), std::move(value));
  }
  bool contains(std::string_view name) const { return find(name) != nullptr; }
  const T* find(std::string_view name) const {
    for (const auto& [n, v] : entries_) {
      if (n == name) return &v;
    }
    return nullptr;
  }
  const T& at(std::string_view name) const {
    const T* v = find(name);
    if (!v) throw UnknownName(kind_, name);
    return *v;
  }
  const std::vector<std::pair<std::string, T>>& entries() const noexcept {
    return entries_;
  }
  std::size_t size() const noexcept { return entries_.size(); }

 private:
  std::string kind_;
  std::vector<std::pair<std::string, T>> entries_;
};

/// Names of four projectors (E0, E1, F1, E2) forming a candidate contrary
/// inference.
struct QuadrupleNames {
  std::string e0, e1, f1, e2;
};

struct SearchSettings {
  int dim = 3;
  std::size_t trials = 1000;
  std::uint64_t seed = 1;
  bool constrained = true;
  bool allow_higher_rank = false;
  std::vector<QuadrupleNames> planted;
};

struct SimulationSettings {
  std::vector<std::string> catalog;
  std::vector<double> weights;
  std::size_t ensemble_size = 100000;
  std::uint64_t seed = 1;
  /// Pairs of single-event history names enforced under Axiom 3 mode.
  std::vector<std::pair<std::string, std::string>> axiom3_pairs;
  /// Optional (h0, E1, F1) history names for the contrary-inference report.
  std::optional<std::string> contrary_h0, contrary_e1, contrary_f1;
};

/// Named objects over one Hilbert space of dimension `dim`.
struct Scenario {
  int dim = 0;
  double tol = kDefaultTol;
  bool allow_zero_members = false;
  std::size_t enumeration_cap = kDefaultEnumerationCap;
  NamedTable<Vector> vectors{"vector"};
  NamedTable<Projector> projectors{"projector"};
  NamedTable<Decomposition> decompositions{"decomposition"};
  NamedTable<History> histories{"history"};
  NamedTable<Family> families{"family"};
  /// Defaults to the maximally mixed state.
  std::optional<DensityMatrix> rho;
  SearchSettings search;
  SimulationSettings simulation;

  DensityMatrix density() const {
    return rho ? *rho : DensityMatrix::maximally_mixed(dim);
  }
};

}  // namespace cohist
