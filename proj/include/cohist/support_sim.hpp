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

// Finite-ensemble support model. Each system is assigned one catalog family
// (drawn by membership weight) together with every catalog family that
// coarse-grains it, and one elementary history of that family drawn with
// its probability. Occurrence in the coarser families follows by
// coarse-graining. This is one admissible model among many; the checkers
// below verify its properties on the concrete ensemble.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cohist/family_algebra.hpp"
#include "cohist/histories.hpp"
#include "cohist/inference.hpp"

namespace cohist {

inline constexpr std::uint64_t kNotMember =
    std::numeric_limits<std::uint64_t>::max();

struct SystemRecord {
  std::size_t id = 0;
  /// Catalog index of the family the system was drawn in.
  std::uint32_t maximal_family = 0;
  /// realized[c] = linear elementary index realized in catalog family c, or
  /// kNotMember when the system is outside c(C).
  std::vector<std::uint64_t> realized;

  bool member(std::size_t c) const {
    return c < realized.size() && realized[c] != kNotMember;
  }
};

enum class TruthValue { False, True, Undefined };

std::string to_string(TruthValue t);

struct SupportOptions {
  /// One weight per catalog family; empty selects uniform weights over the
  /// catalog's maximal elements.
  std::vector<double> weights;
  std::size_t ensemble_size = 100000;
  std::uint64_t seed = 1;
  double tol = kDefaultTol;
  /// Single-event history pairs (E, F). For every such pair, systems on which
  /// E or F occurs also join the catalog family generated by {E, F} (and its
  /// coarse-grainings), realizing the member that occurs.
  std::vector<std::pair<History, History>> axiom3_pairs;
  Exec exec = Exec::Parallel;
};

/// A history resolved against each catalog family: per-slot member bitmasks,
/// or nullopt where the family does not contain it.
struct PreparedHistory {
  History history;
  std::vector<std::optional<std::vector<std::uint64_t>>> cells;
};

class SupportModel {
 public:
  /// Throws InvalidArgument, InconsistentCatalogFamily or ZeroWeightSum.
  static SupportModel build(std::vector<Family> catalog,
                            std::vector<std::string> names,
                            const DensityMatrix& rho,
                            const SupportOptions& options);

  /// Model over explicit records, unchecked against the sampling rules.
  static SupportModel from_records(std::vector<Family> catalog,
                                   std::vector<std::string> names,
                                   const DensityMatrix& rho, double tol,
                                   std::vector<SystemRecord> systems);

  const std::vector<Family>& catalog() const noexcept { return catalog_; }
  const std::vector<std::string>& names() const noexcept { return names_; }
  const std::vector<SystemRecord>& systems() const noexcept { return systems_; }
  std::size_t size() const noexcept { return systems_.size(); }
  const DensityMatrix& rho() const noexcept { return rho_; }
  double tol() const noexcept { return tol_; }
  std::uint64_t seed() const noexcept { return seed_; }
  const std::vector<double>& weights() const noexcept { return weights_; }

  /// coarser(a, b): family a is a coarse-graining of family b.
  bool coarser(std::size_t a, std::size_t b) const {
    return order_.at(a).at(b) != 0;
  }
  /// Not a strict coarse-graining of another catalog family.
  bool is_maximal(std::size_t c) const;
  /// Probability of every elementary history of family c.
  const std::vector<double>& elementary_probabilities(std::size_t c) const {
    return probabilities_.at(c);
  }
  /// Catalog index of a family equivalent to f.
  std::optional<std::size_t> find_family(const Family& f) const;

  const SystemRecord& system(std::size_t id) const;
  History realized_history(std::size_t id, std::size_t c) const;

  PreparedHistory prepare(const History& h) const;
  /// Whether the elementary history `linear` of family c lies in the cell.
  bool in_cell(std::size_t c, std::uint64_t linear,
               const std::vector<std::uint64_t>& masks) const;

  /// Truth value via the first membership family containing h.
  TruthValue truth_functional(std::size_t id, const PreparedHistory& h) const;
  TruthValue truth_functional(std::size_t id, const History& h) const;
  /// Truth value via one specific family; Undefined outside c(C) or when C
  /// does not contain h.
  TruthValue truth_via(std::size_t id, std::size_t c,
                       const PreparedHistory& h) const;
  /// Some membership family of the system contains h.
  bool in_domain(std::size_t id, const PreparedHistory& h) const;

 private:
  SupportModel() : rho_(DensityMatrix::maximally_mixed(1)) {}
  void prepare_catalog();

  std::vector<Family> catalog_;
  std::vector<std::string> names_;
  DensityMatrix rho_;
  double tol_ = kDefaultTol;
  std::uint64_t seed_ = 0;
  std::vector<double> weights_;
  std::vector<std::vector<char>> order_;
  std::vector<char> consistent_;
  /// maps_[a][b] = coarse_map(catalog a, catalog b) when a <= b.
  std::vector<std::vector<std::vector<std::uint64_t>>> maps_;
  std::vector<std::vector<std::uint64_t>> strides_;
  std::vector<std::vector<double>> probabilities_;
  std::vector<SystemRecord> systems_;
};

/// Linear elementary index of `fine` mapped to the linear index of the
/// elementary history of `coarse` that contains it.
std::vector<std::uint64_t> coarse_map(const Family& coarse, const Family& fine,
                                      double tol);

struct Violation {
  std::size_t system = 0;
  std::string detail;
};

/// Axiom 1: for catalog families a <= b, c(b) is inside c(a).
struct AxiomReport {
  std::size_t checks = 0;
  std::size_t violation_count = 0;
  /// First few violations.
  std::vector<Violation> violations;
  bool holds() const noexcept { return violation_count == 0; }
};

AxiomReport check_axiom1(const SupportModel& model, Exec exec = Exec::Parallel);

/// Axiom 2: for every history shared by two catalog families, the two
/// families agree on its occurrence for every system in both supports.
AxiomReport check_axiom2(const SupportModel& model, Exec exec = Exec::Parallel,
                         std::size_t cap = kDefaultEnumerationCap);

/// For every catalog family and every one of its histories, c1 and c0
/// partition c(C) and agree with the model's truth functional; the c1 cells
/// of elementary histories partition c(C).
AxiomReport check_partition(const SupportModel& model,
                            Exec exec = Exec::Parallel,
                            std::size_t cap = kDefaultEnumerationCap);

/// No system lies in c1(h0), c(C1) and c(C2) at once. Throws
/// NotAContraryPair unless C1, C2 carry contrary inferences from h0.
bool check_condition8(const SupportModel& model, std::size_t c1,
                      std::size_t c2, const History& h0);

struct CaseCounts {
  std::size_t in_scope = 0;
  std::size_t p1 = 0, p2 = 0;
  std::size_t q1 = 0, q2 = 0;
  std::size_t r = 0;
  /// Systems in both c(C1) and c(C2).
  std::size_t overlap = 0;
  /// In case p (q) but E1 (F1) not true.
  std::size_t anomalies = 0;

  std::size_t p() const noexcept { return p1 + p2; }
  std::size_t q() const noexcept { return q1 + q2; }
  bool is_partition() const noexcept {
    return overlap == 0 && anomalies == 0 && p() + q() + r == in_scope;
  }
};

/// Case analysis of the systems where h0 occurs and that lie in c(C1),
/// c(C2) or c(C({h0})). Throws CatalogMissingFamily.
CaseCounts classify_cases(const SupportModel& model,
                          const ContraryInferenceCertificate& certificate);

struct Proposition1Report {
  /// No system on which both E and F occur.
  bool holds = true;
  std::size_t double_occurrences = 0;
  /// Whether C({E, F}) is in the catalog, so that the antecedent applies.
  bool antecedent_checked = false;
  /// Systems with E and F both defined but outside c(C({E, F})).
  std::size_t antecedent_violations = 0;
};

/// E and F must be orthogonal in some slot of the merged grid (else
/// NotOrthogonal).
Proposition1Report proposition1_check(const SupportModel& model,
                                      const History& e, const History& f);

struct Axiom3Report {
  /// Systems where E (F) occurs but F (E) is undefined.
  std::size_t clause_i_violations = 0;
  /// Systems where E (F) occurs but F (E) does not fail to occur.
  std::size_t clause_ii_violations = 0;
  /// E (F) occurs, F (E) undefined.
  std::size_t p2_type = 0;
  bool proposition1_holds = true;
  bool holds() const noexcept {
    return clause_i_violations == 0 && clause_ii_violations == 0;
  }
};

Axiom3Report check_axiom3_variant(const SupportModel& model, const History& e,
                                  const History& f);

struct FrequencyRow {
  std::size_t family = 0;
  std::string history;
  std::size_t count = 0;
  /// Systems drawn in a family that C coarse-grains.
  std::size_t population = 0;
  double expected = 0.0;
  double observed = 0.0;
  double sigma = 0.0;
  /// Expected count >= 20.
  bool checked = false;
  bool within_3sigma = true;
  /// |observed - expected| <= 5 / sqrt(population) (population >= 1000).
  bool within_5_over_sqrt_n = true;
};

struct FrequencyReport {
  std::vector<FrequencyRow> rows;
  bool holds() const;
};

FrequencyReport check_frequencies(const SupportModel& model);

/// Systems whose truth-functional domain contains both histories.
std::size_t count_defining_both(const SupportModel& model, const History& a,
                                const History& b);

/// Tab-separated table: system id, maximal family, realized elementary.
std::string export_ensemble(const SupportModel& model);

}  // namespace cohist
