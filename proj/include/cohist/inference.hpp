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

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cohist/error.hpp"
#include "cohist/family_algebra.hpp"
#include "cohist/histories.hpp"
#include "cohist/scenario.hpp"

namespace cohist {

/// Conditions a contrary-inference certificate must meet, in check order.
enum class Condition {
  ConsistencyC1,
  ConsistencyC2,
  JointProbability,
  ConditionalC1,
  ConditionalC2,
};

std::string to_string(Condition c);

class ConditionFailed : public Error {
 public:
  ConditionFailed(Condition which, double value, bool marginal)
      : Error("contrary-inference condition " + to_string(which) +
              " failed (value " + std::to_string(value) +
              (marginal ? ", marginal)" : ")")),
        which(which),
        value(value),
        marginal(marginal) {}
  Condition which;
  double value;
  bool marginal;
};

/// Times of the three slots (E0, middle event, E2).
inline constexpr std::array<Time, 3> kTripleTimes{0.0, 1.0, 2.0};

/// Verified quadruple (E0, E1, F1, E2) with E1 orthogonal to F1 such that
/// p(E1 | E0, E2) = 1 in C1 = C({(E0,E1,E2)}), p(F1 | E0, E2) = 1 in
/// C2 = C({(E0,F1,E2)}), and p(E0, E2) > 0.
struct ContraryInferenceCertificate {
  Projector e0, e1, f1, e2;
  Family family_c1, family_c2;
  double p_joint = 0.0;
  double cond_c1 = 0.0;
  double cond_c2 = 0.0;
  double decoherence_c1 = 0.0;
  double decoherence_c2 = 0.0;
  double tol = kDefaultTol;

  /// (E0, 1, E2).
  History h0() const;
  /// (E0, E1, E2).
  History h1() const;
  /// (E0, F1, E2).
  History h2() const;
  /// E1 alone at the middle time.
  History middle_e1() const;
  History middle_f1() const;
};

struct TripleOutcome {
  std::optional<ContraryInferenceCertificate> certificate;
  std::optional<Condition> failed;
  double value = 0.0;
  /// |cond - 1| in (tol, 100 tol].
  bool marginal = false;
};

/// Non-throwing form of kent_triple_check (orthogonality still throws).
TripleOutcome evaluate_triple(const Projector& e0, const Projector& e1,
                              const Projector& f1, const Projector& e2,
                              const DensityMatrix& rho, double tol);

/// Throws NotOrthogonal or ConditionFailed.
ContraryInferenceCertificate kent_triple_check(const Projector& e0,
                                               const Projector& e1,
                                               const Projector& f1,
                                               const Projector& e2,
                                               const DensityMatrix& rho,
                                               double tol);

/// N = 3 scenario: orthonormal A, B, C; E0 onto (A+B+C)/sqrt3, E2 onto
/// (A+B-C)/sqrt3, E1 = |A><A|, F1 = |B><B|, with the families C1, C2,
/// C({h0}), C({E1,F1}) and the joint refinement of C1 and C2.
Scenario three_box_fixture();

enum class SearchStrategy {
  /// E0, E1, F1, E2 independent Haar-random (E1 orthogonalized against F1).
  Haar,
  /// E0, E1, F1 Haar-random; E2 = |phi><phi| with phi Haar-random inside
  /// the subspace where (1-E1) and (1-F1) carry no amplitude between E0 and
  /// E2, so both conditionals equal one.
  Constrained,
};

struct Quadruple {
  Projector e0, e1, f1, e2;
};

struct SearchOptions {
  int dim = 3;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  double tol = kDefaultTol;
  SearchStrategy strategy = SearchStrategy::Constrained;
  /// Rank-1 projectors only unless set.
  bool allow_higher_rank = false;
  /// Evaluated first, as trials 0 .. planted.size()-1.
  std::vector<Quadruple> planted;
  Exec exec = Exec::Parallel;
};

struct SearchResult {
  std::vector<ContraryInferenceCertificate> certificates;
  /// Trial index of each certificate.
  std::vector<std::size_t> trial_indices;
  std::size_t marginal = 0;
  std::size_t trials_run = 0;
};

/// Randomized search; deterministic in (options, seed) and independent of
/// the thread schedule. Throws InvalidArgument unless 3 <= dim <= 8.
SearchResult find_contrary_inferences(const SearchOptions& options);

std::vector<ContraryInferenceCertificate> find_contrary_inferences(
    int dim, std::size_t trials, std::uint64_t seed, double tol = kDefaultTol);

/// Slot-wise subspace order on the merged time grid.
bool history_leq(const History& h1, const History& h2, double tol);

struct OrderedViolation {
  History dominator;
  std::size_t family_index = 0;
  double weight_history = 0.0;
  double weight_dominator = 0.0;
};

/// Verdict relative to the finite catalog it was computed against.
struct OrderedConsistencyVerdict {
  History history;
  bool ordered_consistent = true;
  std::optional<OrderedViolation> violating_pair;
  std::size_t comparisons = 0;
  std::size_t catalog_size = 0;
};

/// Checks weight(h) <= weight(h2) + tol for every history h2 of every
/// catalog family with h <= h2, weight(g) = Tr(C_g rho C_g^dagger). Throws
/// InconsistentFamily for an inconsistent catalog member and
/// HistoryNotInAnyConsistentFamily when h is in none of them.
OrderedConsistencyVerdict is_ordered_consistent(const History& h,
                                                std::span<const Family> catalog,
                                                const DensityMatrix& rho,
                                                double tol);

/// Orthogonal nonzero single-time events E (history of c1) and F (history of
/// c2) with p(E | h0) = 1 in c1 and p(F | h0) = 1 in c2.
struct ContraryWitness {
  History e;
  History f;
};

std::optional<ContraryWitness> find_contrary_witness(const Family& c1,
                                                     const Family& c2,
                                                     const History& h0,
                                                     const DensityMatrix& rho,
                                                     double tol);

}  // namespace cohist
