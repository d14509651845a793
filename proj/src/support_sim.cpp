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

#include "cohist/support_sim.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cohist/error.hpp"

namespace cohist {

namespace {

constexpr std::size_t kMaxReportedViolations = 10;

std::vector<std::uint64_t> masks_of(const SlotSubsets& subsets) {
  std::vector<std::uint64_t> masks;
  masks.reserve(subsets.size());
  for (const auto& s : subsets) {
    std::uint64_t m = 0;
    for (std::size_t i : s) m |= std::uint64_t{1} << i;
    masks.push_back(m);
  }
  return masks;
}

std::size_t position_of(std::span<const Time> grid, Time t) {
  return static_cast<std::size_t>(
      std::lower_bound(grid.begin(), grid.end(), t) - grid.begin());
}

// Per-system (checks, violations, first detail) reduced in id order.
struct SystemTally {
  std::size_t checks = 0;
  std::size_t violations = 0;
  std::string detail;
};

template <class Body>
AxiomReport tally(const SupportModel& model, Exec exec, Body body) {
  std::vector<SystemTally> per(model.size());
  kernels::for_each_index(
      model.size(), [&](std::size_t id) { body(id, per[id]); }, exec);
  AxiomReport report;
  for (std::size_t id = 0; id < per.size(); ++id) {
    report.checks += per[id].checks;
    report.violation_count += per[id].violations;
    if (per[id].violations > 0 &&
        report.violations.size() < kMaxReportedViolations) {
      report.violations.push_back({id, per[id].detail});
    }
  }
  return report;
}

void require_orthogonal(const History& e, const History& f, double tol) {
  const std::vector<Time> times = merge_times(e.times(), f.times());
  const History pe = pad_to(e, times, tol);
  const History pf = pad_to(f, times, tol);
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (orthogonal(pe.event(k), pf.event(k), tol)) return;
  }
  throw NotOrthogonal(0, 1);
}

}  // namespace

std::string to_string(TruthValue t) {
  switch (t) {
    case TruthValue::False:
      return "false";
    case TruthValue::True:
      return "true";
    case TruthValue::Undefined:
      return "undefined";
  }
  return "unknown";
}

std::vector<std::uint64_t> coarse_map(const Family& coarse, const Family& fine,
                                      double tol) {
  const FamilyOrderResult order = is_coarse_graining(coarse, fine, tol);
  if (!order.is_coarse_graining) {
    throw InvalidArgument("family is not a coarse-graining of the other");
  }
  const std::vector<Time>& grid = order.times;
  // inverse[m][j] = coarse member containing fine member j at grid slot m.
  std::vector<std::vector<std::size_t>> inverse(grid.size());
  for (std::size_t m = 0; m < grid.size(); ++m) {
    for (std::size_t i = 0; i < order.witness[m].size(); ++i) {
      for (std::size_t j : order.witness[m][i]) {
        if (inverse[m].size() <= j) inverse[m].resize(j + 1, 0);
        inverse[m][j] = i;
      }
    }
  }
  std::vector<std::size_t> fine_pos, coarse_pos;
  for (Time t : fine.times()) fine_pos.push_back(position_of(grid, t));
  for (Time t : coarse.times()) coarse_pos.push_back(position_of(grid, t));

  const std::size_t n = fine.elementary_count();
  std::vector<std::uint64_t> out(n);
  std::vector<std::size_t> at_grid(grid.size());
  for (std::size_t linear = 0; linear < n; ++linear) {
    const ElementaryIndex idx = unlinear_index(fine, linear);
    std::fill(at_grid.begin(), at_grid.end(), 0);
    for (std::size_t k = 0; k < idx.size(); ++k) at_grid[fine_pos[k]] = idx[k];
    ElementaryIndex cidx(coarse.size());
    for (std::size_t k = 0; k < coarse.size(); ++k) {
      const std::size_t m = coarse_pos[k];
      cidx[k] = inverse[m].at(at_grid[m]);
    }
    out[linear] = linear_index(coarse, cidx);
  }
  return out;
}

void SupportModel::prepare_catalog() {
  const std::size_t n = catalog_.size();
  order_.assign(n, std::vector<char>(n, 0));
  maps_.assign(n, std::vector<std::vector<std::uint64_t>>(n));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (catalog_[a].dim() != catalog_[b].dim()) continue;
      if (is_coarse_graining(catalog_[a], catalog_[b], tol_).is_coarse_graining) {
        order_[a][b] = 1;
        maps_[a][b] = coarse_map(catalog_[a], catalog_[b], tol_);
      }
    }
  }
  strides_.clear();
  probabilities_.clear();
  consistent_.clear();
  for (const Family& f : catalog_) {
    std::vector<std::uint64_t> strides(f.size(), 1);
    for (std::size_t k = f.size(); k-- > 1;) {
      strides[k - 1] = strides[k] * f.slot(k).size();
    }
    strides_.push_back(std::move(strides));
    const DecoherenceReport r = is_weakly_decoherent(f, rho_, tol_);
    consistent_.push_back(r.is_weakly_decoherent ? 1 : 0);
    std::vector<double> p(r.histories.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
      const auto ii = static_cast<Eigen::Index>(i);
      p[i] = std::clamp(r.pairs(ii, ii).real(), 0.0, 1.0);
    }
    probabilities_.push_back(std::move(p));
  }
}

SupportModel SupportModel::from_records(std::vector<Family> catalog,
                                        std::vector<std::string> names,
                                        const DensityMatrix& rho, double tol,
                                        std::vector<SystemRecord> systems) {
  if (catalog.empty()) throw InvalidArgument("empty catalog");
  if (names.empty()) {
    for (std::size_t i = 0; i < catalog.size(); ++i) {
      names.push_back("F" + std::to_string(i));
    }
  }
  if (names.size() != catalog.size()) {
    throw InvalidArgument("catalog names do not match catalog");
  }
  for (const Family& f : catalog) {
    if (f.dim() != rho.dim()) throw DimensionMismatch(rho.dim(), f.dim());
  }
  SupportModel model;
  model.catalog_ = std::move(catalog);
  model.names_ = std::move(names);
  model.rho_ = rho;
  model.tol_ = tol;
  model.prepare_catalog();
  for (std::size_t i = 0; i < systems.size(); ++i) {
    SystemRecord& s = systems[i];
    s.id = i;
    s.realized.resize(model.catalog_.size(), kNotMember);
    if (s.maximal_family >= model.catalog_.size()) {
      throw InvalidArgument("system maximal family out of range");
    }
  }
  model.systems_ = std::move(systems);
  return model;
}

SupportModel SupportModel::build(std::vector<Family> catalog,
                                 std::vector<std::string> names,
                                 const DensityMatrix& rho,
                                 const SupportOptions& options) {
  SupportModel model =
      from_records(std::move(catalog), std::move(names), rho, options.tol, {});
  model.seed_ = options.seed;
  const std::size_t n = model.catalog_.size();
  for (std::size_t c = 0; c < n; ++c) {
    if (!model.consistent_[c]) throw InconsistentCatalogFamily(c);
  }

  std::vector<double> weights = options.weights;
  if (weights.empty()) {
    for (std::size_t c = 0; c < n; ++c) {
      weights.push_back(model.is_maximal(c) ? 1.0 : 0.0);
    }
  }
  if (weights.size() != n) {
    throw InvalidArgument("one membership weight per catalog family expected");
  }
  double total = 0.0;
  std::vector<double> family_cdf;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw InvalidArgument("membership weights must be finite and nonnegative");
    }
    total += w;
    family_cdf.push_back(total);
  }
  if (!(total > 0.0)) throw ZeroWeightSum();
  model.weights_ = weights;

  std::vector<std::vector<double>> elementary_cdf;
  for (const auto& p : model.probabilities_) {
    std::vector<double> cdf;
    double acc = 0.0;
    for (double x : p) cdf.push_back(acc += x);
    elementary_cdf.push_back(std::move(cdf));
  }
  kernels::SamplerInput in;
  in.family_cdf = family_cdf;
  in.elementary_cdf = elementary_cdf;
  in.ensemble_size = options.ensemble_size;
  in.seed = options.seed;
  const std::vector<kernels::SystemDraw> draws =
      kernels::sample_systems(in, options.exec);

  model.systems_.resize(draws.size());
  kernels::for_each_index(
      draws.size(),
      [&](std::size_t id) {
        SystemRecord& s = model.systems_[id];
        s.id = id;
        s.maximal_family = draws[id].family;
        s.realized.assign(n, kNotMember);
        for (std::size_t c = 0; c < n; ++c) {
          if (model.order_[c][s.maximal_family]) {
            s.realized[c] = model.maps_[c][s.maximal_family][draws[id].elementary];
          }
        }
      },
      options.exec);

  for (const auto& [e, f] : options.axiom3_pairs) {
    if (e.size() != 1 || f.size() != 1 || e.times() != f.times()) {
      throw InvalidArgument("paired events must be single events at one time");
    }
    require_orthogonal(e, f, model.tol_);
    const History pair[2] = {e, f};
    const Family joint = generated_family(pair, model.tol_);
    const auto target = model.find_family(joint);
    if (!target) throw CatalogMissingFamily("C({" + e.describe() + "," + f.describe() + "})");
    const std::size_t t = *target;
    const PreparedHistory pe = model.prepare(e);
    const PreparedHistory pf = model.prepare(f);
    // Elementary history of the joint family realizing each event.
    std::optional<std::uint64_t> realize[2];
    for (int which = 0; which < 2; ++which) {
      const auto& cell = (which == 0 ? pe : pf).cells[t];
      std::vector<std::uint64_t> hits;
      for (std::uint64_t l = 0; l < model.probabilities_[t].size(); ++l) {
        if (cell && model.in_cell(t, l, *cell)) hits.push_back(l);
      }
      if (hits.size() == 1) realize[which] = hits.front();
    }
    if (!realize[0] || !realize[1]) {
      throw InvalidArgument("paired events are not atoms of their joint family");
    }
    std::vector<std::optional<std::uint64_t>> joins(model.size());
    kernels::for_each_index(
        model.size(),
        [&](std::size_t id) {
          if (model.systems_[id].member(t)) return;
          if (model.truth_functional(id, pe) == TruthValue::True) {
            joins[id] = realize[0];
          } else if (model.truth_functional(id, pf) == TruthValue::True) {
            joins[id] = realize[1];
          }
        },
        options.exec);
    for (std::size_t id = 0; id < model.size(); ++id) {
      if (!joins[id]) continue;
      SystemRecord& s = model.systems_[id];
      for (std::size_t c = 0; c < n; ++c) {
        if (model.order_[c][t] && !s.member(c)) {
          s.realized[c] = model.maps_[c][t][*joins[id]];
        }
      }
    }
  }
  return model;
}

bool SupportModel::is_maximal(std::size_t c) const {
  for (std::size_t b = 0; b < catalog_.size(); ++b) {
    if (b != c && order_[c][b] && !order_[b][c]) return false;
  }
  return true;
}

std::optional<std::size_t> SupportModel::find_family(const Family& f) const {
  for (std::size_t c = 0; c < catalog_.size(); ++c) {
    if (catalog_[c].dim() == f.dim() && equivalent(catalog_[c], f, tol_)) {
      return c;
    }
  }
  return std::nullopt;
}

const SystemRecord& SupportModel::system(std::size_t id) const {
  if (id >= systems_.size()) throw UnknownSystem(id);
  return systems_[id];
}

History SupportModel::realized_history(std::size_t id, std::size_t c) const {
  const SystemRecord& s = system(id);
  if (!s.member(c)) throw InvalidArgument("system is outside the family's support");
  return elementary_history(catalog_.at(c), unlinear_index(catalog_[c], s.realized[c]));
}

PreparedHistory SupportModel::prepare(const History& h) const {
  PreparedHistory p{h, {}};
  for (const Family& f : catalog_) {
    if (f.dim() != h.dim()) throw DimensionMismatch(f.dim(), h.dim());
    const auto subsets = locate_in_family(h, f, tol_);
    p.cells.push_back(subsets ? std::optional(masks_of(*subsets)) : std::nullopt);
  }
  return p;
}

bool SupportModel::in_cell(std::size_t c, std::uint64_t linear,
                           const std::vector<std::uint64_t>& masks) const {
  const Family& f = catalog_[c];
  const auto& strides = strides_[c];
  for (std::size_t k = 0; k < f.size(); ++k) {
    const std::uint64_t digit = (linear / strides[k]) % f.slot(k).size();
    if (!(masks[k] >> digit & 1U)) return false;
  }
  return true;
}

TruthValue SupportModel::truth_via(std::size_t id, std::size_t c,
                                   const PreparedHistory& h) const {
  const SystemRecord& s = system(id);
  if (!s.member(c) || !h.cells.at(c)) return TruthValue::Undefined;
  return in_cell(c, s.realized[c], *h.cells[c]) ? TruthValue::True
                                                : TruthValue::False;
}

TruthValue SupportModel::truth_functional(std::size_t id,
                                          const PreparedHistory& h) const {
  for (std::size_t c = 0; c < catalog_.size(); ++c) {
    const TruthValue t = truth_via(id, c, h);
    if (t != TruthValue::Undefined) return t;
  }
  return TruthValue::Undefined;
}

TruthValue SupportModel::truth_functional(std::size_t id,
                                          const History& h) const {
  (void)system(id);
  return truth_functional(id, prepare(h));
}

bool SupportModel::in_domain(std::size_t id, const PreparedHistory& h) const {
  const SystemRecord& s = system(id);
  for (std::size_t c = 0; c < catalog_.size(); ++c) {
    if (s.member(c) && h.cells.at(c)) return true;
  }
  return false;
}

AxiomReport check_axiom1(const SupportModel& model, Exec exec) {
  const std::size_t n = model.catalog().size();
  return tally(model, exec, [&](std::size_t id, SystemTally& t) {
    const SystemRecord& s = model.systems()[id];
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        if (a == b || !model.coarser(a, b) || !s.member(b)) continue;
        ++t.checks;
        if (!s.member(a)) {
          if (t.violations++ == 0) {
            t.detail = "in c(" + model.names()[b] + ") but not in c(" +
                       model.names()[a] + ")";
          }
        }
      }
    }
  });
}

AxiomReport check_axiom2(const SupportModel& model, Exec exec,
                         std::size_t cap) {
  struct Shared {
    std::size_t a, b;
    PreparedHistory h;
  };
  const auto& catalog = model.catalog();
  std::vector<Shared> shared;
  for (std::size_t a = 0; a < catalog.size(); ++a) {
    for (std::size_t b = a + 1; b < catalog.size(); ++b) {
      for (const CoarseIndex& idx : enumerate_coarse_indices(catalog[a], cap)) {
        PreparedHistory h = model.prepare(coarse_history(catalog[a], idx));
        if (h.cells[b]) shared.push_back({a, b, std::move(h)});
      }
    }
  }
  return tally(model, exec, [&](std::size_t id, SystemTally& t) {
    const SystemRecord& s = model.systems()[id];
    for (const Shared& sh : shared) {
      if (!s.member(sh.a) || !s.member(sh.b)) continue;
      ++t.checks;
      const TruthValue va = model.truth_via(id, sh.a, sh.h);
      const TruthValue vb = model.truth_via(id, sh.b, sh.h);
      if (va != vb && t.violations++ == 0) {
        t.detail = sh.h.history.describe() + " is " + to_string(va) +
                   " via " + model.names()[sh.a] + " but " + to_string(vb) +
                   " via " + model.names()[sh.b];
      }
    }
  });
}

AxiomReport check_partition(const SupportModel& model, Exec exec,
                            std::size_t cap) {
  struct Cell {
    std::size_t family;
    std::vector<std::uint64_t> masks;
    PreparedHistory h;
  };
  const auto& catalog = model.catalog();
  std::vector<Cell> cells;
  for (std::size_t c = 0; c < catalog.size(); ++c) {
    for (const CoarseIndex& idx : enumerate_coarse_indices(catalog[c], cap)) {
      cells.push_back({c, idx, model.prepare(coarse_history(catalog[c], idx))});
    }
  }
  return tally(model, exec, [&](std::size_t id, SystemTally& t) {
    const SystemRecord& s = model.systems()[id];
    for (std::size_t c = 0; c < catalog.size(); ++c) {
      if (!s.member(c)) continue;
      // Elementary cells: exactly one contains the system.
      ++t.checks;
      std::size_t hits = 0;
      const std::size_t count = model.elementary_probabilities(c).size();
      for (std::size_t l = 0; l < count; ++l) hits += (s.realized[c] == l);
      if (hits != 1 && t.violations++ == 0) {
        t.detail = "realized index outside the elementary histories of " +
                   model.names()[c];
      }
    }
    for (const Cell& cell : cells) {
      if (!s.member(cell.family)) continue;
      ++t.checks;
      const bool in_c1 = model.in_cell(cell.family, s.realized[cell.family], cell.masks);
      const TruthValue v = model.truth_functional(id, cell.h);
      const TruthValue want = in_c1 ? TruthValue::True : TruthValue::False;
      if (v != want && t.violations++ == 0) {
        t.detail = cell.h.history.describe() + " in " +
                   model.names()[cell.family] + ": cell says " +
                   to_string(want) + ", truth functional " + to_string(v);
      }
    }
  });
}

bool check_condition8(const SupportModel& model, std::size_t c1,
                      std::size_t c2, const History& h0) {
  const auto& catalog = model.catalog();
  if (c1 >= catalog.size() || c2 >= catalog.size()) {
    throw InvalidArgument("catalog index out of range");
  }
  if (!find_contrary_witness(catalog[c1], catalog[c2], h0, model.rho(),
                             model.tol())) {
    throw NotAContraryPair();
  }
  const PreparedHistory p = model.prepare(h0);
  for (const SystemRecord& s : model.systems()) {
    if (s.member(c1) && s.member(c2) &&
        model.truth_functional(s.id, p) == TruthValue::True) {
      return false;
    }
  }
  return true;
}

CaseCounts classify_cases(const SupportModel& model,
                          const ContraryInferenceCertificate& certificate) {
  const auto i1 = model.find_family(certificate.family_c1);
  if (!i1) throw CatalogMissingFamily("C1");
  const auto i2 = model.find_family(certificate.family_c2);
  if (!i2) throw CatalogMissingFamily("C2");
  const History h0 = certificate.h0();
  const auto i0 = model.find_family(generated_family(std::span(&h0, 1), model.tol()));
  if (!i0) throw CatalogMissingFamily("C({h0})");

  const PreparedHistory ph0 = model.prepare(h0);
  const PreparedHistory pe = model.prepare(certificate.middle_e1());
  const PreparedHistory pf = model.prepare(certificate.middle_f1());
  CaseCounts counts;
  for (const SystemRecord& s : model.systems()) {
    const bool m1 = s.member(*i1), m2 = s.member(*i2), m0 = s.member(*i0);
    if (!(m1 || m2 || m0)) continue;
    if (model.truth_functional(s.id, ph0) != TruthValue::True) continue;
    ++counts.in_scope;
    if (m1 && m2) {
      ++counts.overlap;
      continue;
    }
    if (m1 || m2) {
      const PreparedHistory& mine = m1 ? pe : pf;
      const PreparedHistory& other = m1 ? pf : pe;
      if (model.truth_functional(s.id, mine) != TruthValue::True) {
        ++counts.anomalies;
        continue;
      }
      const bool defined =
          model.truth_functional(s.id, other) != TruthValue::Undefined;
      if (m1) {
        ++(defined ? counts.p1 : counts.p2);
      } else {
        ++(defined ? counts.q1 : counts.q2);
      }
    } else {
      ++counts.r;
    }
  }
  return counts;
}

Proposition1Report proposition1_check(const SupportModel& model,
                                      const History& e, const History& f) {
  require_orthogonal(e, f, model.tol());
  const PreparedHistory pe = model.prepare(e);
  const PreparedHistory pf = model.prepare(f);
  std::optional<std::size_t> joint;
  try {
    const History pair[2] = {e, f};
    joint = model.find_family(generated_family(pair, model.tol()));
  } catch (const Error&) {
  }
  Proposition1Report report;
  report.antecedent_checked = joint.has_value();
  for (const SystemRecord& s : model.systems()) {
    const TruthValue te = model.truth_functional(s.id, pe);
    const TruthValue tf = model.truth_functional(s.id, pf);
    if (te == TruthValue::True && tf == TruthValue::True) {
      ++report.double_occurrences;
    }
    if (joint && te != TruthValue::Undefined && tf != TruthValue::Undefined &&
        !s.member(*joint)) {
      ++report.antecedent_violations;
    }
  }
  report.holds = report.double_occurrences == 0;
  return report;
}

Axiom3Report check_axiom3_variant(const SupportModel& model, const History& e,
                                  const History& f) {
  require_orthogonal(e, f, model.tol());
  const PreparedHistory pe = model.prepare(e);
  const PreparedHistory pf = model.prepare(f);
  Axiom3Report report;
  for (const SystemRecord& s : model.systems()) {
    const TruthValue te = model.truth_functional(s.id, pe);
    const TruthValue tf = model.truth_functional(s.id, pf);
    for (const auto& [mine, other] : {std::pair{te, tf}, std::pair{tf, te}}) {
      if (mine != TruthValue::True) continue;
      if (other == TruthValue::Undefined) {
        ++report.clause_i_violations;
        ++report.p2_type;
      }
      if (other != TruthValue::False) ++report.clause_ii_violations;
    }
    if (te == TruthValue::True && tf == TruthValue::True) {
      report.proposition1_holds = false;
    }
  }
  return report;
}

bool FrequencyReport::holds() const {
  return std::all_of(rows.begin(), rows.end(), [](const FrequencyRow& r) {
    return r.within_3sigma && r.within_5_over_sqrt_n;
  });
}

FrequencyReport check_frequencies(const SupportModel& model) {
  const auto& catalog = model.catalog();
  FrequencyReport report;
  for (std::size_t c = 0; c < catalog.size(); ++c) {
    const std::vector<double>& p = model.elementary_probabilities(c);
    std::vector<std::size_t> counts(p.size(), 0);
    std::size_t population = 0;
    for (const SystemRecord& s : model.systems()) {
      if (!model.coarser(c, s.maximal_family)) continue;
      ++population;
      ++counts.at(s.realized[c]);
    }
    if (population == 0) continue;
    const double n = static_cast<double>(population);
    for (std::size_t l = 0; l < p.size(); ++l) {
      FrequencyRow row;
      row.family = c;
      row.history = elementary_history(catalog[c], unlinear_index(catalog[c], l))
                        .describe();
      row.count = counts[l];
      row.population = population;
      row.expected = p[l];
      row.observed = static_cast<double>(counts[l]) / n;
      row.sigma = std::sqrt(p[l] * (1.0 - p[l]) / n);
      row.checked = n * p[l] >= 20.0;
      const double deviation = std::abs(row.observed - row.expected);
      // Rounding slack for probabilities that are exactly 0 or 1.
      const double slack = 1e-9;
      if (row.checked) row.within_3sigma = deviation <= 3.0 * row.sigma + slack;
      if (population >= 1000) {
        row.within_5_over_sqrt_n = deviation <= 5.0 / std::sqrt(n) + slack;
      }
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

std::size_t count_defining_both(const SupportModel& model, const History& a,
                                const History& b) {
  const PreparedHistory pa = model.prepare(a);
  const PreparedHistory pb = model.prepare(b);
  std::size_t count = 0;
  for (const SystemRecord& s : model.systems()) {
    count += model.in_domain(s.id, pa) && model.in_domain(s.id, pb);
  }
  return count;
}

std::string export_ensemble(const SupportModel& model) {
  std::ostringstream out;
  out << "system\tfamily\trealized\n";
  for (const SystemRecord& s : model.systems()) {
    out << s.id << '\t' << model.names()[s.maximal_family] << '\t'
        << model.realized_history(s.id, s.maximal_family).describe() << '\n';
  }
  return out.str();
}

}  // namespace cohist
