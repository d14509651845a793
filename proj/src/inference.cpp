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

#include "cohist/inference.hpp"

#include <algorithm>
#include <cmath>

#include "cohist/rng.hpp"

namespace cohist {

namespace {

constexpr double kMarginalFactor = 100.0;

std::vector<Time> triple_times() {
  return {kTripleTimes.begin(), kTripleTimes.end()};
}

History triple(const Projector& a, const Projector& b, const Projector& c,
               std::vector<std::string> labels) {
  return History({a, b, c}, triple_times(), std::move(labels));
}

History middle(const Projector& p, std::string label) {
  return History({p}, {kTripleTimes[1]}, {std::move(label)});
}

// Projector onto a Haar-random rank-r subspace of the range of `within`.
Projector random_subspace(Rng& rng, int dim, int rank, const Matrix& within,
                          double tol) {
  std::vector<Vector> vs;
  while (static_cast<int>(vs.size()) < rank) {
    vs.push_back(within * rng.haar_vector(dim));
    try {
      (void)projector_from_vectors(vs, tol);
    } catch (const DependentVectors&) {
      vs.pop_back();
    }
  }
  return projector_from_vectors(vs, tol);
}

int random_rank(Rng& rng, int lo, int hi) {
  if (hi <= lo) return lo;
  return lo + static_cast<int>(rng.index(static_cast<std::size_t>(hi - lo + 1)));
}

Quadruple draw_quadruple(Rng& rng, const SearchOptions& opt) {
  const int n = opt.dim;
  const Matrix id = Matrix::Identity(n, n);
  const bool higher = opt.allow_higher_rank;
  const int r1 = higher ? random_rank(rng, 1, n - 2) : 1;
  const int r2 = higher ? random_rank(rng, 1, n - 1 - r1) : 1;
  const Projector e1 = random_subspace(rng, n, r1, id, opt.tol);
  const Projector f1 =
      random_subspace(rng, n, r2, id - e1.matrix(), opt.tol);

  if (opt.strategy == SearchStrategy::Haar) {
    const int r0 = higher ? random_rank(rng, 1, n - 1) : 1;
    const int r3 = higher ? random_rank(rng, 1, n - 1) : 1;
    const Projector e0 = random_subspace(rng, n, r0, id, opt.tol);
    const Projector e2 = random_subspace(rng, n, r3, id, opt.tol);
    return {e0, e1, f1, e2};
  }

  const Vector psi = rng.haar_vector(n);
  const Projector e0 = projector_from_vectors(std::span(&psi, 1), opt.tol);
  // phi must be orthogonal to (1-E1)psi and (1-F1)psi.
  std::vector<Vector> constraints{(id - e1.matrix()) * psi};
  try {
    constraints.push_back((id - f1.matrix()) * psi);
    (void)projector_from_vectors(constraints, opt.tol);
  } catch (const DependentVectors&) {
    constraints.pop_back();
  }
  const Projector q = projector_from_vectors(constraints, opt.tol);
  Vector phi = (id - q.matrix()) * rng.haar_vector(n);
  const double norm = phi.norm();
  if (norm <= opt.tol) phi = rng.haar_vector(n);
  else phi /= norm;
  const Projector e2 = projector_from_vectors(std::span(&phi, 1), opt.tol);
  return {e0, e1, f1, e2};
}

}  // namespace

std::string to_string(Condition c) {
  switch (c) {
    case Condition::ConsistencyC1:
      return "consistency_c1";
    case Condition::ConsistencyC2:
      return "consistency_c2";
    case Condition::JointProbability:
      return "p_joint";
    case Condition::ConditionalC1:
      return "cond_c1";
    case Condition::ConditionalC2:
      return "cond_c2";
  }
  return "unknown";
}

History ContraryInferenceCertificate::h0() const {
  return triple(e0, Projector::identity(e0.dim()), e2, {"E0", "1", "E2"});
}
History ContraryInferenceCertificate::h1() const {
  return triple(e0, e1, e2, {"E0", "E1", "E2"});
}
History ContraryInferenceCertificate::h2() const {
  return triple(e0, f1, e2, {"E0", "F1", "E2"});
}
History ContraryInferenceCertificate::middle_e1() const {
  return middle(e1, "E1");
}
History ContraryInferenceCertificate::middle_f1() const {
  return middle(f1, "F1");
}

TripleOutcome evaluate_triple(const Projector& e0, const Projector& e1,
                              const Projector& f1, const Projector& e2,
                              const DensityMatrix& rho, double tol) {
  if (!orthogonal(e1, f1, tol)) throw NotOrthogonal(1, 2);
  ContraryInferenceCertificate cert{e0, e1, f1, e2,
                                    Family::trivial(e0.dim(), triple_times()),
                                    Family::trivial(e0.dim(), triple_times())};
  cert.tol = tol;
  TripleOutcome out;
  auto fail = [&](Condition which, double value, bool marginal = false) {
    out.failed = which;
    out.value = value;
    out.marginal = marginal;
    return out;
  };

  const History h1 = cert.h1();
  const History h2 = cert.h2();
  cert.family_c1 = generated_family(std::span(&h1, 1), tol);
  cert.family_c2 = generated_family(std::span(&h2, 1), tol);
  const auto r1 = is_weakly_decoherent(cert.family_c1, rho, tol, Exec::Serial);
  cert.decoherence_c1 = r1.max_off_diagonal_re;
  if (!r1.is_weakly_decoherent) {
    return fail(Condition::ConsistencyC1, r1.max_off_diagonal_re);
  }
  const auto r2 = is_weakly_decoherent(cert.family_c2, rho, tol, Exec::Serial);
  cert.decoherence_c2 = r2.max_off_diagonal_re;
  if (!r2.is_weakly_decoherent) {
    return fail(Condition::ConsistencyC2, r2.max_off_diagonal_re);
  }

  const History h0 = cert.h0();
  cert.p_joint = std::clamp(history_weight(h0, rho), 0.0, 1.0);
  if (!(cert.p_joint > tol)) return fail(Condition::JointProbability, cert.p_joint);

  const double w1 = std::clamp(
      history_weight(conjoin(cert.middle_e1(), h0, tol), rho), 0.0, 1.0);
  const double w2 = std::clamp(
      history_weight(conjoin(cert.middle_f1(), h0, tol), rho), 0.0, 1.0);
  cert.cond_c1 = w1 / cert.p_joint;
  cert.cond_c2 = w2 / cert.p_joint;
  for (const auto& [which, value] :
       {std::pair{Condition::ConditionalC1, cert.cond_c1},
        std::pair{Condition::ConditionalC2, cert.cond_c2}}) {
    const double gap = std::abs(value - 1.0);
    if (gap > tol) return fail(which, value, gap <= kMarginalFactor * tol);
  }
  out.certificate = std::move(cert);
  return out;
}

ContraryInferenceCertificate kent_triple_check(const Projector& e0,
                                               const Projector& e1,
                                               const Projector& f1,
                                               const Projector& e2,
                                               const DensityMatrix& rho,
                                               double tol) {
  TripleOutcome out = evaluate_triple(e0, e1, f1, e2, rho, tol);
  if (!out.certificate) throw ConditionFailed(*out.failed, out.value, out.marginal);
  return std::move(*out.certificate);
}

Scenario three_box_fixture() {
  Scenario s;
  s.dim = 3;
  const auto basis = [](double a, double b, double c) {
    Vector v(3);
    v << Complex(a), Complex(b), Complex(c);
    return v;
  };
  s.vectors.add("A", basis(1, 0, 0));
  s.vectors.add("B", basis(0, 1, 0));
  s.vectors.add("C", basis(0, 0, 1));
  s.vectors.add("psi", basis(1, 1, 1));
  s.vectors.add("phi", basis(1, 1, -1));
  const auto span_of = [&](const char* name) {
    const Vector& v = s.vectors.at(name);
    return projector_from_vectors(std::span(&v, 1), s.tol);
  };
  s.projectors.add("I", Projector::identity(3));
  s.projectors.add("E0", span_of("psi"));
  s.projectors.add("E1", span_of("A"));
  s.projectors.add("F1", span_of("B"));
  s.projectors.add("E2", span_of("phi"));
  const Projector& E0 = s.projectors.at("E0");
  const Projector& E1 = s.projectors.at("E1");
  const Projector& F1 = s.projectors.at("F1");
  const Projector& E2 = s.projectors.at("E2");
  const Projector& I = s.projectors.at("I");

  s.histories.add("h0", History({E0, E2}, {0.0, 2.0}, {"E0", "E2"}));
  s.histories.add("h1", triple(E0, E1, E2, {"E0", "E1", "E2"}));
  s.histories.add("h2", triple(E0, F1, E2, {"E0", "F1", "E2"}));
  s.histories.add("e1_t1", middle(E1, "E1"));
  s.histories.add("f1_t1", middle(F1, "F1"));
  s.histories.add("top", triple(I, I, I, {"1", "1", "1"}));

  const auto gen = [&](std::vector<std::string> names) {
    std::vector<History> hs;
    for (const auto& n : names) hs.push_back(s.histories.at(n));
    return generated_family(hs, s.tol);
  };
  s.families.add("C1", gen({"h1"}));
  s.families.add("C2", gen({"h2"}));
  s.families.add("Ch0", gen({"h0"}));
  s.families.add("CEF", gen({"e1_t1", "f1_t1"}));
  s.families.add("joint", common_refinement(s.families.at("C1"),
                                            s.families.at("C2"), s.tol));

  s.search.dim = 3;
  s.search.trials = 1000;
  s.search.seed = 1;
  s.search.planted.push_back({"E0", "E1", "F1", "E2"});

  s.simulation.catalog = {"C1", "C2", "Ch0"};
  s.simulation.weights = {1.0, 1.0, 1.0};
  s.simulation.ensemble_size = 100000;
  s.simulation.seed = 20261019;
  s.simulation.contrary_h0 = "h0";
  s.simulation.contrary_e1 = "e1_t1";
  s.simulation.contrary_f1 = "f1_t1";
  return s;
}

SearchResult find_contrary_inferences(const SearchOptions& options) {
  if (options.dim < 3 || options.dim > 8) {
    throw InvalidArgument("search dimension must lie in [3, 8]");
  }
  for (const Quadruple& q : options.planted) {
    for (const Projector* p : {&q.e0, &q.e1, &q.f1, &q.e2}) {
      if (p->dim() != options.dim) throw DimensionMismatch(options.dim, p->dim());
    }
  }
  const DensityMatrix rho = DensityMatrix::maximally_mixed(options.dim);
  const std::size_t total = options.planted.size() + options.trials;
  std::vector<TripleOutcome> outcomes(total);
  kernels::for_each_index(
      total,
      [&](std::size_t t) {
        const Quadruple q = [&] {
          if (t < options.planted.size()) return options.planted[t];
          Rng rng = Rng::for_stream(options.seed, t);
          return draw_quadruple(rng, options);
        }();
        if (!orthogonal(q.e1, q.f1, options.tol)) return;
        outcomes[t] = evaluate_triple(q.e0, q.e1, q.f1, q.e2, rho, options.tol);
      },
      options.exec);

  SearchResult result;
  result.trials_run = total;
  for (std::size_t t = 0; t < total; ++t) {
    if (outcomes[t].certificate) {
      result.certificates.push_back(std::move(*outcomes[t].certificate));
      result.trial_indices.push_back(t);
    } else if (outcomes[t].marginal) {
      ++result.marginal;
    }
  }
  return result;
}

std::vector<ContraryInferenceCertificate> find_contrary_inferences(
    int dim, std::size_t trials, std::uint64_t seed, double tol) {
  SearchOptions options;
  options.dim = dim;
  options.trials = trials;
  options.seed = seed;
  options.tol = tol;
  return find_contrary_inferences(options).certificates;
}

bool history_leq(const History& h1, const History& h2, double tol) {
  if (h1.dim() != h2.dim()) throw DimensionMismatch(h1.dim(), h2.dim());
  const std::vector<Time> times = merge_times(h1.times(), h2.times());
  const History a = pad_to(h1, times, tol);
  const History b = pad_to(h2, times, tol);
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (!leq(a.event(k), b.event(k), tol)) return false;
  }
  return true;
}

OrderedConsistencyVerdict is_ordered_consistent(const History& h,
                                                std::span<const Family> catalog,
                                                const DensityMatrix& rho,
                                                double tol) {
  OrderedConsistencyVerdict verdict{h, true, std::nullopt, 0, 0};
  verdict.catalog_size = catalog.size();
  bool member = false;
  for (const Family& f : catalog) {
    const DecoherenceReport r = is_weakly_decoherent(f, rho, tol);
    if (!r.is_weakly_decoherent) throw InconsistentFamily(r.max_off_diagonal_re);
    member = member || in_family(h, f, tol);
  }
  if (!member) throw HistoryNotInAnyConsistentFamily();

  const double weight = history_weight(h, rho);
  for (std::size_t fi = 0; fi < catalog.size(); ++fi) {
    for (const CoarseIndex& idx : enumerate_coarse_indices(catalog[fi])) {
      History dominator = coarse_history(catalog[fi], idx);
      if (!history_leq(h, dominator, tol)) continue;
      ++verdict.comparisons;
      const double w2 = history_weight(dominator, rho);
      if (weight > w2 + tol) {
        verdict.ordered_consistent = false;
        verdict.violating_pair =
            OrderedViolation{std::move(dominator), fi, weight, w2};
        return verdict;
      }
    }
  }
  return verdict;
}

std::optional<ContraryWitness> find_contrary_witness(const Family& c1,
                                                     const Family& c2,
                                                     const History& h0,
                                                     const DensityMatrix& rho,
                                                     double tol) {
  for (const Family* f : {&c1, &c2}) {
    if (!is_weakly_decoherent(*f, rho, tol).is_weakly_decoherent) return std::nullopt;
    if (!in_family(h0, *f, tol)) return std::nullopt;
  }
  const double p0 = history_weight(h0, rho);
  if (!(p0 > tol)) return std::nullopt;

  // Nonzero single-time events of `f` that h0 makes certain.
  auto certain_events = [&](const Family& f) {
    std::vector<History> out;
    for (std::size_t k = 0; k < f.size(); ++k) {
      const Decomposition& slot = f.slot(k);
      const std::uint64_t full = (std::uint64_t{1} << slot.size()) - 1;
      for (std::uint64_t mask = 1; mask < full; ++mask) {
        std::vector<Projector> terms;
        std::string label;
        for (std::size_t i = 0; i < slot.size(); ++i) {
          if (mask >> i & 1U) {
            terms.push_back(slot[i]);
            label += (label.empty() ? "" : "+") + slot.labels()[i];
          }
        }
        History e({Projector::from_orthogonal_sum(terms, f.dim())},
                  {f.times()[k]}, {label});
        try {
          const double joint = history_weight(conjoin(e, h0, tol), rho);
          if (std::abs(joint / p0 - 1.0) <= tol) out.push_back(std::move(e));
        } catch (const NotConjoinable&) {
        }
      }
    }
    return out;
  };

  const std::vector<History> es = certain_events(c1);
  const std::vector<History> fs = certain_events(c2);
  for (const History& e : es) {
    for (const History& f : fs) {
      if (e.times() == f.times() && orthogonal(e.event(0), f.event(0), tol)) {
        return ContraryWitness{e, f};
      }
    }
  }
  return std::nullopt;
}

}  // namespace cohist
