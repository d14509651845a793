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

#include "cohist/histories.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "cohist/error.hpp"

namespace cohist {

namespace {

std::string default_event_label(const Projector& p) {
  if (p.is_zero()) return "0";
  if (p.rank() == p.dim()) return "1";
  return "P";
}

bool is_identity(const Projector& p, double tol) {
  return approx_equal(p.matrix(), Matrix::Identity(p.dim(), p.dim()), tol);
}

std::optional<History> try_align(const History& h, std::span<const Time> times,
                                 double tol) {
  std::vector<Projector> events;
  std::vector<std::string> labels;
  events.reserve(times.size());
  labels.reserve(times.size());
  std::size_t next = 0;
  for (const Time t : times) {
    while (next < h.size() && h.times()[next] < t) {
      if (!is_identity(h.event(next), tol)) return std::nullopt;
      ++next;
    }
    if (next < h.size() && h.times()[next] == t) {
      events.push_back(h.event(next));
      labels.push_back(h.labels()[next]);
      ++next;
    } else {
      events.push_back(Projector::identity(h.dim()));
      labels.push_back("1");
    }
  }
  for (; next < h.size(); ++next) {
    if (!is_identity(h.event(next), tol)) return std::nullopt;
  }
  return History(std::move(events), std::vector<Time>(times.begin(), times.end()),
                 std::move(labels));
}

std::string join_labels(const Decomposition& slot,
                        const std::vector<std::size_t>& chosen) {
  if (chosen.empty()) return "0";
  if (chosen.size() == slot.size() && slot.size() > 1) return "1";
  std::string out;
  for (std::size_t i : chosen) {
    if (!out.empty()) out += "+";
    out += slot.labels()[i];
  }
  return out;
}

std::size_t saturating_mul(std::size_t a, std::size_t b) {
  if (a != 0 && b > std::numeric_limits<std::size_t>::max() / a) {
    return std::numeric_limits<std::size_t>::max();
  }
  return a * b;
}

}  // namespace

// --- Decomposition ----------------------------------------------------------

Decomposition Decomposition::validate(std::vector<Projector> members,
                                      double tol,
                                      std::vector<std::string> labels,
                                      bool allow_zero_members) {
  if (members.empty()) throw InvalidArgument("decomposition has no members");
  const int dim = members.front().dim();
  for (const Projector& m : members) {
    if (m.dim() != dim) throw DimensionMismatch(dim, m.dim());
  }
  if (labels.empty()) {
    for (std::size_t i = 0; i < members.size(); ++i) {
      labels.push_back("P" + std::to_string(i));
    }
  } else if (labels.size() != members.size()) {
    throw InvalidArgument("decomposition label count does not match members");
  }
  if (!allow_zero_members) {
    for (std::size_t i = 0; i < members.size(); ++i) {
      if (members[i].is_zero()) throw ZeroMember(i);
    }
  }
  for (std::size_t i = 0; i < members.size(); ++i) {
    for (std::size_t j = i + 1; j < members.size(); ++j) {
      if (!orthogonal(members[i], members[j], tol)) throw NotOrthogonal(i, j);
    }
  }
  Matrix total = Matrix::Zero(dim, dim);
  for (const Projector& m : members) total += m.matrix();
  const double residual = max_abs_entry(total - Matrix::Identity(dim, dim));
  if (residual > tol) throw DoesNotSumToIdentity(residual);
  return Decomposition(std::move(members), std::move(labels));
}

Decomposition Decomposition::trivial(int dim) {
  return Decomposition({Projector::identity(dim)}, {"1"});
}

// --- History ----------------------------------------------------------------

History::History(std::vector<Projector> events, std::vector<Time> times,
                 std::vector<std::string> labels)
    : events_(std::move(events)),
      times_(std::move(times)),
      labels_(std::move(labels)) {
  if (events_.empty()) throw InvalidArgument("history has no events");
  if (times_.size() != events_.size()) {
    throw InvalidArgument("history needs one time per event");
  }
  for (std::size_t k = 1; k < times_.size(); ++k) {
    if (!(times_[k - 1] < times_[k])) {
      throw InvalidArgument("history times must be strictly increasing");
    }
  }
  const int dim = events_.front().dim();
  for (const Projector& e : events_) {
    if (e.dim() != dim) throw DimensionMismatch(dim, e.dim());
  }
  if (labels_.empty()) {
    for (const Projector& e : events_) labels_.push_back(default_event_label(e));
  } else if (labels_.size() != events_.size()) {
    throw InvalidArgument("history label count does not match events");
  }
}

History History::sequential(std::vector<Projector> events,
                            std::vector<std::string> labels) {
  std::vector<Time> times(events.size());
  for (std::size_t k = 0; k < times.size(); ++k) times[k] = static_cast<Time>(k);
  return History(std::move(events), std::move(times), std::move(labels));
}

std::string History::describe() const {
  std::string out = "(";
  for (std::size_t k = 0; k < size(); ++k) {
    if (k) out += ",";
    out += labels_[k];
  }
  return out + ")";
}

// --- Family -----------------------------------------------------------------

Family::Family(std::vector<Decomposition> slots, std::vector<Time> times)
    : slots_(std::move(slots)), times_(std::move(times)) {
  if (slots_.empty()) throw InvalidArgument("family has no slots");
  if (times_.size() != slots_.size()) {
    throw InvalidArgument("family needs one time per slot");
  }
  for (std::size_t k = 1; k < times_.size(); ++k) {
    if (!(times_[k - 1] < times_[k])) {
      throw InvalidArgument("family times must be strictly increasing");
    }
  }
  const int dim = slots_.front().dim();
  for (const Decomposition& d : slots_) {
    if (d.dim() != dim) throw DimensionMismatch(dim, d.dim());
  }
}

Family Family::trivial(int dim, std::vector<Time> times) {
  std::vector<Decomposition> slots(times.size(), Decomposition::trivial(dim));
  return Family(std::move(slots), std::move(times));
}

std::size_t Family::elementary_count() const noexcept {
  std::size_t n = 1;
  for (const Decomposition& d : slots_) n = saturating_mul(n, d.size());
  return n;
}

// --- time grids ---------------------------------------------------------------

std::vector<Time> merge_times(std::span<const Time> a, std::span<const Time> b) {
  std::vector<Time> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

History pad_to(const History& h, std::span<const Time> times, double tol) {
  auto aligned = try_align(h, times, tol);
  if (!aligned) {
    throw InvalidArgument("history has a non-trivial event outside the time grid");
  }
  return std::move(*aligned);
}

Family pad_to(const Family& family, std::span<const Time> times) {
  std::vector<Decomposition> slots;
  slots.reserve(times.size());
  std::size_t next = 0;
  for (const Time t : times) {
    if (next < family.size() && family.times()[next] == t) {
      slots.push_back(family.slot(next++));
    } else {
      slots.push_back(Decomposition::trivial(family.dim()));
    }
  }
  if (next != family.size()) {
    throw InvalidArgument("time grid does not contain every family slot");
  }
  return Family(std::move(slots), std::vector<Time>(times.begin(), times.end()));
}

// --- enumeration ----------------------------------------------------------------

std::vector<ElementaryIndex> enumerate_elementary_indices(const Family& family,
                                                          std::size_t cap) {
  const std::size_t total = family.elementary_count();
  if (total > cap) throw ExplosionGuard(cap);
  std::vector<ElementaryIndex> out;
  out.reserve(total);
  for (std::size_t linear = 0; linear < total; ++linear) {
    out.push_back(unlinear_index(family, linear));
  }
  return out;
}

std::vector<History> enumerate_elementary(const Family& family, std::size_t cap) {
  std::vector<History> out;
  for (const ElementaryIndex& idx : enumerate_elementary_indices(family, cap)) {
    out.push_back(elementary_history(family, idx));
  }
  return out;
}

std::size_t linear_index(const Family& family, const ElementaryIndex& idx) {
  std::size_t linear = 0;
  for (std::size_t k = 0; k < family.size(); ++k) {
    linear = linear * family.slot(k).size() + idx.at(k);
  }
  return linear;
}

ElementaryIndex unlinear_index(const Family& family, std::size_t linear) {
  ElementaryIndex idx(family.size());
  for (std::size_t k = family.size(); k-- > 0;) {
    const std::size_t radix = family.slot(k).size();
    idx[k] = linear % radix;
    linear /= radix;
  }
  return idx;
}

History elementary_history(const Family& family, const ElementaryIndex& idx) {
  std::vector<Projector> events;
  std::vector<std::string> labels;
  for (std::size_t k = 0; k < family.size(); ++k) {
    events.push_back(family.slot(k)[idx.at(k)]);
    labels.push_back(family.slot(k).labels()[idx[k]]);
  }
  return History(std::move(events), family.times(), std::move(labels));
}

std::vector<CoarseIndex> enumerate_coarse_indices(const Family& family,
                                                  std::size_t cap) {
  std::size_t total = 1;
  std::vector<std::uint64_t> radix;
  for (const Decomposition& d : family.slots()) {
    if (d.size() >= 63) throw ExplosionGuard(cap);
    radix.push_back(std::uint64_t{1} << d.size());
    total = saturating_mul(total, radix.back());
  }
  if (total > cap) throw ExplosionGuard(cap);
  std::vector<CoarseIndex> out;
  out.reserve(total);
  for (std::size_t linear = 0; linear < total; ++linear) {
    CoarseIndex idx(family.size());
    std::size_t rest = linear;
    for (std::size_t k = family.size(); k-- > 0;) {
      idx[k] = rest % radix[k];
      rest /= radix[k];
    }
    out.push_back(std::move(idx));
  }
  return out;
}

History coarse_history(const Family& family, const CoarseIndex& idx) {
  std::vector<Projector> events;
  std::vector<std::string> labels;
  for (std::size_t k = 0; k < family.size(); ++k) {
    const Decomposition& slot = family.slot(k);
    std::vector<Projector> terms;
    std::vector<std::size_t> chosen;
    for (std::size_t i = 0; i < slot.size(); ++i) {
      if (idx.at(k) >> i & 1U) {
        terms.push_back(slot[i]);
        chosen.push_back(i);
      }
    }
    events.push_back(Projector::from_orthogonal_sum(terms, family.dim()));
    labels.push_back(join_labels(slot, chosen));
  }
  return History(std::move(events), family.times(), std::move(labels));
}

// --- membership -------------------------------------------------------------------

std::optional<SlotSubsets> locate_in_family(const History& h,
                                            const Family& family, double tol) {
  if (h.dim() != family.dim()) throw DimensionMismatch(family.dim(), h.dim());
  const auto aligned = try_align(h, family.times(), tol);
  if (!aligned) return std::nullopt;
  SlotSubsets subsets(family.size());
  for (std::size_t k = 0; k < family.size(); ++k) {
    const Matrix& event = aligned->event(k).matrix();
    const Decomposition& slot = family.slot(k);
    Matrix total = Matrix::Zero(family.dim(), family.dim());
    for (std::size_t i = 0; i < slot.size(); ++i) {
      const Matrix& member = slot[i].matrix();
      const double overlap = (event * member).trace().real();
      if (overlap > 0.5 * member.trace().real()) {
        subsets[k].push_back(i);
        total += member;
      }
    }
    if (!approx_equal(total, event, tol)) return std::nullopt;
  }
  return subsets;
}

bool in_family(const History& h, const Family& family, double tol) {
  return locate_in_family(h, family, tol).has_value();
}

std::vector<ElementaryIndex> coarse_cell_indices(const History& h,
                                                 const Family& family,
                                                 double tol) {
  const auto subsets = locate_in_family(h, family, tol);
  if (!subsets) throw HistoryNotInFamily();
  std::vector<ElementaryIndex> cell;
  std::size_t total = 1;
  for (const auto& s : *subsets) total *= s.size();
  cell.reserve(total);
  for (std::size_t linear = 0; linear < total; ++linear) {
    ElementaryIndex idx(family.size());
    std::size_t rest = linear;
    for (std::size_t k = family.size(); k-- > 0;) {
      const auto& s = (*subsets)[k];
      idx[k] = s[rest % s.size()];
      rest /= s.size();
    }
    cell.push_back(std::move(idx));
  }
  return cell;
}

std::vector<History> coarse_history_cell(const History& h, const Family& family,
                                         double tol) {
  std::vector<History> out;
  for (const ElementaryIndex& idx : coarse_cell_indices(h, family, tol)) {
    out.push_back(elementary_history(family, idx));
  }
  return out;
}

// --- decoherence and probabilities ----------------------------------------------

Matrix chain_operator(const History& h) {
  Matrix c = h.event(0).matrix();
  for (std::size_t k = 1; k < h.size(); ++k) c = h.event(k).matrix() * c;
  return c;
}

Complex decoherence_functional(const History& h1, const History& h2,
                               const DensityMatrix& rho) {
  if (h1.dim() != h2.dim()) throw DimensionMismatch(h1.dim(), h2.dim());
  if (rho.dim() != h1.dim()) throw DimensionMismatch(h1.dim(), rho.dim());
  return (chain_operator(h1) * rho.matrix() * chain_operator(h2).adjoint())
      .trace();
}

double history_weight(const History& h, const DensityMatrix& rho) {
  return decoherence_functional(h, h, rho).real();
}

DecoherenceReport is_weakly_decoherent(const Family& family,
                                       const DensityMatrix& rho, double tol,
                                       Exec exec, std::size_t cap) {
  if (rho.dim() != family.dim()) throw DimensionMismatch(family.dim(), rho.dim());
  DecoherenceReport report;
  report.tol_used = tol;
  report.histories = enumerate_elementary_indices(family, cap);
  std::vector<Matrix> chains(report.histories.size());
  kernels::for_each_index(
      chains.size(),
      [&](std::size_t i) {
        chains[i] = chain_operator(elementary_history(family, report.histories[i]));
      },
      exec);
  report.pairs = kernels::decoherence_table(chains, rho.matrix(), exec);
  const auto m = static_cast<std::size_t>(report.pairs.rows());
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      const double re = std::abs(report.pairs(i, j).real());
      if (re > report.max_off_diagonal_re) {
        report.max_off_diagonal_re = re;
        report.worst_pair = {i, j};
      }
    }
  }
  report.is_weakly_decoherent = report.max_off_diagonal_re <= tol;
  return report;
}

namespace {

double clamped_weight(const History& h, const DensityMatrix& rho) {
  return std::clamp(history_weight(h, rho), 0.0, 1.0);
}

void require_consistent(const Family& family, const DensityMatrix& rho,
                        double tol) {
  const DecoherenceReport report = is_weakly_decoherent(family, rho, tol);
  if (!report.is_weakly_decoherent) {
    throw InconsistentFamily(report.max_off_diagonal_re);
  }
}

}  // namespace

double probability(const History& h, const Family& family,
                   const DensityMatrix& rho, double tol) {
  require_consistent(family, rho, tol);
  if (!in_family(h, family, tol)) throw HistoryNotInFamily();
  return clamped_weight(h, rho);
}

History conjoin(const History& a, const History& b, double tol) {
  if (a.dim() != b.dim()) throw DimensionMismatch(a.dim(), b.dim());
  const std::vector<Time> times = merge_times(a.times(), b.times());
  const History pa = pad_to(a, times, tol);
  const History pb = pad_to(b, times, tol);
  std::vector<Projector> events;
  std::vector<std::string> labels;
  for (std::size_t k = 0; k < times.size(); ++k) {
    const Projector& ea = pa.event(k);
    const Projector& eb = pb.event(k);
    if (!commutes(ea, eb, tol)) {
      throw NotConjoinable("events at slot " + std::to_string(k) +
                           " do not commute");
    }
    events.push_back(product(ea, eb, tol));
    const std::string& la = pa.labels()[k];
    const std::string& lb = pb.labels()[k];
    if (la == "1" || la == lb) {
      labels.push_back(lb);
    } else if (lb == "1") {
      labels.push_back(la);
    } else {
      labels.push_back(la + "&" + lb);
    }
  }
  return History(std::move(events), times, std::move(labels));
}

double conditional_probability(const History& target, const History& given,
                               const Family& family, const DensityMatrix& rho,
                               double tol) {
  require_consistent(family, rho, tol);
  if (!in_family(given, family, tol) || !in_family(target, family, tol)) {
    throw HistoryNotInFamily();
  }
  const History joint = conjoin(target, given, tol);
  if (!in_family(joint, family, tol)) {
    throw NotConjoinable("slot-wise product is not a history of the family");
  }
  const double p_given = clamped_weight(given, rho);
  if (p_given <= tol) throw ZeroConditioningEvent(p_given);
  return clamped_weight(joint, rho) / p_given;
}

}  // namespace cohist
