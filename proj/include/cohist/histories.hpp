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
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cohist/kernels.hpp"
#include "cohist/linalg.hpp"

namespace cohist {

/// Time tag of a slot. Histories and families over different time grids are
/// compared on the merged grid, missing slots carrying the identity.
using Time = double;

/// Default cap on the number of elementary (or coarse) histories enumerated.
inline constexpr std::size_t kDefaultEnumerationCap = 1'000'000;

/// Finite set of pairwise orthogonal projectors summing to the identity.
class Decomposition {
 public:
  /// Throws NotOrthogonal, DoesNotSumToIdentity or ZeroMember.
  static Decomposition validate(std::vector<Projector> members, double tol,
                                std::vector<std::string> labels = {},
                                bool allow_zero_members = false);
  /// {identity}.
  static Decomposition trivial(int dim);

  std::span<const Projector> members() const noexcept { return members_; }
  const Projector& operator[](std::size_t i) const { return members_.at(i); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  std::size_t size() const noexcept { return members_.size(); }
  int dim() const noexcept { return members_.front().dim(); }

 private:
  Decomposition(std::vector<Projector> members, std::vector<std::string> labels)
      : members_(std::move(members)), labels_(std::move(labels)) {}

  std::vector<Projector> members_;
  std::vector<std::string> labels_;
};

/// Sequence of events at strictly increasing times.
class History {
 public:
  /// Throws InvalidArgument on empty/mismatched input, DimensionMismatch if
  /// the events disagree on dimension.
  History(std::vector<Projector> events, std::vector<Time> times,
          std::vector<std::string> labels = {});
  /// Events at times 0, 1, ..., n-1.
  static History sequential(std::vector<Projector> events,
                            std::vector<std::string> labels = {});

  std::span<const Projector> events() const noexcept { return events_; }
  const Projector& event(std::size_t k) const { return events_.at(k); }
  const std::vector<Time>& times() const noexcept { return times_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  std::size_t size() const noexcept { return events_.size(); }
  int dim() const noexcept { return events_.front().dim(); }

  /// "(E0,1,E2)"-style rendering from the event labels.
  std::string describe() const;

 private:
  std::vector<Projector> events_;
  std::vector<Time> times_;
  std::vector<std::string> labels_;
};

/// Ordered slots, each a decomposition of the identity. The family's
/// histories are the slot-wise sums of decomposition members.
class Family {
 public:
  Family(std::vector<Decomposition> slots, std::vector<Time> times);
  /// Slots = {identity} at each time.
  static Family trivial(int dim, std::vector<Time> times);

  const std::vector<Decomposition>& slots() const noexcept { return slots_; }
  const Decomposition& slot(std::size_t k) const { return slots_.at(k); }
  const std::vector<Time>& times() const noexcept { return times_; }
  std::size_t size() const noexcept { return slots_.size(); }
  int dim() const noexcept { return slots_.front().dim(); }

  /// Product of slot sizes, saturating at SIZE_MAX.
  std::size_t elementary_count() const noexcept;

 private:
  std::vector<Decomposition> slots_;
  std::vector<Time> times_;
};

/// Member index per slot.
using ElementaryIndex = std::vector<std::size_t>;
/// Selected members per slot, as a bitmask (bit i = member i).
using CoarseIndex = std::vector<std::uint64_t>;
/// Selected member indices per slot.
using SlotSubsets = std::vector<std::vector<std::size_t>>;

// --- time grids -----------------------------------------------------------

std::vector<Time> merge_times(std::span<const Time> a, std::span<const Time> b);

/// h on `times`, identity at the new slots. Throws InvalidArgument when h
/// has a non-identity event at a time missing from `times`; identity events
/// at such times are dropped.
History pad_to(const History& h, std::span<const Time> times, double tol);

/// Family on `times` (a superset of its own), trivial slots added.
Family pad_to(const Family& family, std::span<const Time> times);

// --- enumeration ----------------------------------------------------------

/// All slot-wise member choices, first slot most significant.
std::vector<ElementaryIndex> enumerate_elementary_indices(
    const Family& family, std::size_t cap = kDefaultEnumerationCap);
std::vector<History> enumerate_elementary(
    const Family& family, std::size_t cap = kDefaultEnumerationCap);

/// Linear position of an elementary index in enumeration order.
std::size_t linear_index(const Family& family, const ElementaryIndex& idx);
ElementaryIndex unlinear_index(const Family& family, std::size_t linear);

History elementary_history(const Family& family, const ElementaryIndex& idx);

/// Every history of the family (all member subsets per slot, the empty
/// subset giving the zero event).
std::vector<CoarseIndex> enumerate_coarse_indices(
    const Family& family, std::size_t cap = kDefaultEnumerationCap);
History coarse_history(const Family& family, const CoarseIndex& idx);

// --- membership -----------------------------------------------------------

/// Slot-wise member subsets summing to h's events, or nullopt when h is not
/// a history of `family`. h is first aligned to the family's time grid.
/// Members are selected by Tr(E M) > Tr(M)/2 and the subset sum is then
/// compared to E within tol.
std::optional<SlotSubsets> locate_in_family(const History& h,
                                            const Family& family, double tol);
bool in_family(const History& h, const Family& family, double tol);

/// The set of elementary histories dominated slot-wise by h.
std::vector<ElementaryIndex> coarse_cell_indices(const History& h,
                                                 const Family& family,
                                                 double tol);
std::vector<History> coarse_history_cell(const History& h, const Family& family,
                                         double tol);

// --- decoherence and probabilities ----------------------------------------

/// C_h = E_n ... E_1.
Matrix chain_operator(const History& h);

/// D(h1, h2) = Tr(C_h1 rho C_h2^dagger).
Complex decoherence_functional(const History& h1, const History& h2,
                               const DensityMatrix& rho);

/// Re Tr(C_h rho C_h^dagger).
double history_weight(const History& h, const DensityMatrix& rho);

struct DecoherenceReport {
  std::vector<ElementaryIndex> histories;
  /// pairs(i, j) = D(h_i, h_j) over the elementary histories.
  Matrix pairs;
  double max_off_diagonal_re = 0.0;
  /// Pair attaining max_off_diagonal_re (i < j); (0, 0) for a single history.
  std::pair<std::size_t, std::size_t> worst_pair{0, 0};
  bool is_weakly_decoherent = true;
  double tol_used = kDefaultTol;
};

/// Weak decoherence over all distinct elementary pairs.
DecoherenceReport is_weakly_decoherent(const Family& family,
                                       const DensityMatrix& rho, double tol,
                                       Exec exec = Exec::Parallel,
                                       std::size_t cap = kDefaultEnumerationCap);

/// p(h) = Re D(h, h), clamped to [0, 1]. Throws InconsistentFamily or
/// HistoryNotInFamily.
double probability(const History& h, const Family& family,
                   const DensityMatrix& rho, double tol);

/// Slot-wise product of two histories on the merged time grid. Throws
/// NotConjoinable when some slot's events do not commute.
History conjoin(const History& a, const History& b, double tol);

/// p(target and given) / p(given) inside `family`. Throws
/// ZeroConditioningEvent, NotConjoinable, InconsistentFamily,
/// HistoryNotInFamily.
double conditional_probability(const History& target, const History& given,
                               const Family& family, const DensityMatrix& rho,
                               double tol);

}  // namespace cohist
