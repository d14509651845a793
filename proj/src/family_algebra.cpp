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

#include "cohist/family_algebra.hpp"

#include "cohist/error.hpp"

namespace cohist {

namespace {

// Each atom is a product of up to m factors, each contributing rounding of
// order tol to its residuals.
constexpr double kProductSlack = 10.0;

struct Factor {
  std::size_t input;
  bool complemented;
};

std::string atom_label(const Matrix& atom, const std::vector<Factor>& factors,
                       std::span<const Projector> inputs,
                       std::span<const std::string> labels, double tol) {
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (approx_equal(atom, inputs[i].matrix(), tol)) return labels[i];
  }
  const auto n = atom.rows();
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (approx_equal(atom, Matrix::Identity(n, n) - inputs[i].matrix(), tol)) {
      return labels[i] + "'";
    }
  }
  std::string plain;
  std::string all;
  for (const Factor& f : factors) {
    const std::string name = labels[f.input] + (f.complemented ? "'" : "");
    all += (all.empty() ? "" : "&") + name;
    if (!f.complemented) plain += (plain.empty() ? "" : "&") + name;
  }
  if (!plain.empty()) return plain;
  return all.empty() ? "1" : all;
}

Decomposition atoms_in_slot(std::span<const Projector> projectors,
                            std::span<const std::string> labels,
                            std::size_t slot, double tol) {
  if (projectors.empty()) throw InvalidArgument("no projectors for slot");
  const int dim = projectors.front().dim();
  for (const Projector& p : projectors) {
    if (p.dim() != dim) throw DimensionMismatch(dim, p.dim());
  }
  for (std::size_t i = 0; i < projectors.size(); ++i) {
    for (std::size_t j = i + 1; j < projectors.size(); ++j) {
      if (!commutes(projectors[i], projectors[j], tol)) {
        throw NonCommutingSlot(slot, i, j);
      }
    }
  }
  std::vector<std::string> names(labels.begin(), labels.end());
  if (names.empty()) {
    for (std::size_t i = 0; i < projectors.size(); ++i) {
      names.push_back("P" + std::to_string(i));
    }
  } else if (names.size() != projectors.size()) {
    throw InvalidArgument("label count does not match projectors");
  }

  std::vector<Projector> atoms{Projector::identity(dim)};
  std::vector<std::vector<Factor>> factors{{}};
  std::vector<Projector> seen;
  for (std::size_t i = 0; i < projectors.size(); ++i) {
    const Projector& p = projectors[i];
    bool duplicate = false;
    for (const Projector& q : seen) {
      duplicate = duplicate || approx_equal(p.matrix(), q.matrix(), tol);
    }
    if (duplicate) continue;
    seen.push_back(p);
    const Projector pc = complement(p);
    std::vector<Projector> next_atoms;
    std::vector<std::vector<Factor>> next_factors;
    for (std::size_t a = 0; a < atoms.size(); ++a) {
      for (const bool comp : {false, true}) {
        const Projector prod =
            product(atoms[a], comp ? pc : p, kProductSlack * tol);
        if (prod.is_zero()) continue;
        next_atoms.push_back(prod);
        next_factors.push_back(factors[a]);
        next_factors.back().push_back({i, comp});
      }
    }
    atoms = std::move(next_atoms);
    factors = std::move(next_factors);
  }
  std::vector<std::string> atom_labels;
  for (std::size_t a = 0; a < atoms.size(); ++a) {
    atom_labels.push_back(
        atom_label(atoms[a].matrix(), factors[a], projectors, names, tol));
  }
  return Decomposition::validate(std::move(atoms), kProductSlack * tol,
                                 std::move(atom_labels));
}

std::vector<std::vector<std::size_t>> witness_for_slot(
    const Decomposition& coarse, const Decomposition& fine, double tol) {
  std::vector<std::vector<std::size_t>> witness;
  std::vector<int> uses(fine.size(), 0);
  for (std::size_t i = 0; i < coarse.size(); ++i) {
    const Matrix& target = coarse[i].matrix();
    Matrix total = Matrix::Zero(target.rows(), target.cols());
    std::vector<std::size_t> chosen;
    for (std::size_t j = 0; j < fine.size(); ++j) {
      const Matrix& member = fine[j].matrix();
      if ((target * member).trace().real() > 0.5 * member.trace().real()) {
        chosen.push_back(j);
        total += member;
        ++uses[j];
      }
    }
    if (!approx_equal(total, target, tol)) return {};
    witness.push_back(std::move(chosen));
  }
  for (std::size_t j = 0; j < fine.size(); ++j) {
    if (uses[j] != 1 && !fine[j].is_zero()) return {};
  }
  return witness;
}

}  // namespace

FamilyOrderResult is_coarse_graining(const Family& coarse, const Family& fine,
                                     double tol) {
  if (coarse.dim() != fine.dim()) throw DimensionMismatch(fine.dim(), coarse.dim());
  FamilyOrderResult result;
  result.times = merge_times(coarse.times(), fine.times());
  const Family c = pad_to(coarse, result.times);
  const Family f = pad_to(fine, result.times);
  for (std::size_t k = 0; k < c.size(); ++k) {
    auto slot_witness = witness_for_slot(c.slot(k), f.slot(k), tol);
    if (slot_witness.empty()) {
      result.witness.clear();
      result.failing_slot = k;
      return result;
    }
    result.witness.push_back(std::move(slot_witness));
  }
  result.is_coarse_graining = true;
  return result;
}

bool equivalent(const Family& a, const Family& b, double tol) {
  return is_coarse_graining(a, b, tol).is_coarse_graining &&
         is_coarse_graining(b, a, tol).is_coarse_graining;
}

Decomposition slot_atoms(std::span<const Projector> projectors,
                         std::span<const std::string> labels, double tol) {
  return atoms_in_slot(projectors, labels, 0, tol);
}

std::vector<Decomposition> atoms_of(
    const std::vector<std::vector<Projector>>& per_slot, double tol) {
  std::vector<Decomposition> out;
  for (std::size_t k = 0; k < per_slot.size(); ++k) {
    out.push_back(atoms_in_slot(per_slot[k], {}, k, tol));
  }
  return out;
}

Family generated_family(std::span<const History> histories, double tol) {
  if (histories.empty()) throw InvalidArgument("no histories to generate from");
  const int dim = histories.front().dim();
  std::vector<Time> times;
  for (const History& h : histories) {
    if (h.dim() != dim) throw DimensionMismatch(dim, h.dim());
    times = merge_times(times, h.times());
  }
  std::vector<std::vector<Projector>> events(times.size());
  std::vector<std::vector<std::string>> labels(times.size());
  for (const History& h : histories) {
    const History padded = pad_to(h, times, tol);
    for (std::size_t k = 0; k < times.size(); ++k) {
      events[k].push_back(padded.event(k));
      labels[k].push_back(padded.labels()[k]);
    }
  }
  std::vector<Decomposition> slots;
  for (std::size_t k = 0; k < times.size(); ++k) {
    slots.push_back(atoms_in_slot(events[k], labels[k], k, tol));
  }
  Family family(std::move(slots), std::move(times));
  for (const History& h : histories) {
    if (!in_family(h, family, kProductSlack * tol)) {
      throw Error("generated family does not contain its generator " +
                  h.describe());
    }
  }
  return family;
}

Family common_refinement(const Family& a, const Family& b, double tol) {
  if (a.dim() != b.dim()) throw DimensionMismatch(a.dim(), b.dim());
  const std::vector<Time> times = merge_times(a.times(), b.times());
  const Family pa = pad_to(a, times);
  const Family pb = pad_to(b, times);
  std::vector<Decomposition> slots;
  for (std::size_t k = 0; k < times.size(); ++k) {
    std::vector<Projector> members;
    std::vector<std::string> labels;
    for (const Family* f : {&pa, &pb}) {
      const Decomposition& d = f->slot(k);
      members.insert(members.end(), d.members().begin(), d.members().end());
      labels.insert(labels.end(), d.labels().begin(), d.labels().end());
    }
    slots.push_back(atoms_in_slot(members, labels, k, tol));
  }
  return Family(std::move(slots), times);
}

std::string to_string(CompatibilityResult::Reason reason) {
  switch (reason) {
    case CompatibilityResult::Reason::Compatible:
      return "Compatible";
    case CompatibilityResult::Reason::NonCommutingSlot:
      return "NonCommutingSlot";
    case CompatibilityResult::Reason::RefinementInconsistent:
      return "RefinementInconsistent";
  }
  return "Unknown";
}

CompatibilityResult are_compatible(const Family& a, const Family& b,
                                   const DensityMatrix& rho, double tol) {
  if (a.dim() != b.dim()) throw DimensionMismatch(a.dim(), b.dim());
  for (const Family* f : {&a, &b}) {
    const DecoherenceReport r = is_weakly_decoherent(*f, rho, tol);
    if (!r.is_weakly_decoherent) throw InconsistentFamily(r.max_off_diagonal_re);
  }
  CompatibilityResult result;
  try {
    result.refined_family = common_refinement(a, b, tol);
  } catch (const NonCommutingSlot& e) {
    result.reason = CompatibilityResult::Reason::NonCommutingSlot;
    result.slot = e.slot;
    return result;
  }
  const DecoherenceReport r = is_weakly_decoherent(*result.refined_family, rho, tol);
  result.refinement_max_off_diagonal_re = r.max_off_diagonal_re;
  result.compatible = r.is_weakly_decoherent;
  result.reason = result.compatible
                      ? CompatibilityResult::Reason::Compatible
                      : CompatibilityResult::Reason::RefinementInconsistent;
  return result;
}

}  // namespace cohist
