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

#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "cohist/cli.hpp"
#include "cohist/family_algebra.hpp"
#include "cohist/inference.hpp"
#include "cohist/report.hpp"
#include "cohist/support_sim.hpp"

namespace cohist {

namespace {

struct Globals {
  std::string scenario_path;
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  std::string format = "human";
};

struct Context {
  std::optional<Scenario> scenario;
  double tol = kDefaultTol;

  const Scenario& s() const {
    if (!scenario) throw InvalidArgument("this command needs --scenario");
    return *scenario;
  }
  DensityMatrix rho() const { return s().density(); }
};

std::string human_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

ordered_json axiom_json(const AxiomReport& r) {
  ordered_json j;
  j["checks"] = r.checks;
  j["violations"] = r.violation_count;
  ordered_json first = ordered_json::array();
  for (const Violation& v : r.violations) {
    first.push_back({{"system", v.system}, {"detail", v.detail}});
  }
  j["first_violations"] = first;
  return j;
}

ordered_json certificate_json(const ContraryInferenceCertificate& c) {
  ordered_json j;
  j["p_joint"] = c.p_joint;
  j["cond_c1"] = c.cond_c1;
  j["cond_c2"] = c.cond_c2;
  j["decoherence_c1"] = c.decoherence_c1;
  j["decoherence_c2"] = c.decoherence_c2;
  j["scenario"] = certificate_fragment(c);
  return j;
}

// --- commands ---------------------------------------------------------------

void check_consistency(const Context& ctx, const std::string& name, Report& r) {
  const Family& f = ctx.s().families.at(name);
  const DecoherenceReport d = is_weakly_decoherent(f, ctx.rho(), ctx.tol);
  r.results["family"] = name;
  r.results["slots"] = f.size();
  r.results["elementary_count"] = f.elementary_count();
  r.results["consistent"] = d.is_weakly_decoherent;
  r.results["max_off_diagonal_re"] = d.max_off_diagonal_re;
  if (d.histories.size() > 1) {
    r.results["worst_pair"] = {
        elementary_history(f, d.histories[d.worst_pair.first]).describe(),
        elementary_history(f, d.histories[d.worst_pair.second]).describe()};
  }
  r.summary = d.is_weakly_decoherent ? "consistent" : "inconsistent";
  r.exit_status = d.is_weakly_decoherent ? kExitAffirmative : kExitNegative;
}

void prob(const Context& ctx, const std::string& family,
          const std::string& history, Report& r) {
  const double p = probability(ctx.s().histories.at(history),
                               ctx.s().families.at(family), ctx.rho(), ctx.tol);
  r.results["family"] = family;
  r.results["history"] = history;
  r.results["probability"] = p;
  r.summary = "p = " + human_number(p);
}

void conditional(const Context& ctx, const std::string& family,
                 const std::string& target, const std::string& given,
                 Report& r) {
  const double p = conditional_probability(
      ctx.s().histories.at(target), ctx.s().histories.at(given),
      ctx.s().families.at(family), ctx.rho(), ctx.tol);
  r.results["family"] = family;
  r.results["target"] = target;
  r.results["given"] = given;
  r.results["probability"] = p;
  r.summary = "p = " + human_number(p);
}

void generate(const Context& ctx, const std::vector<std::string>& names,
              Report& r) {
  std::vector<History> hs;
  for (const auto& n : names) hs.push_back(ctx.s().histories.at(n));
  const Family f = generated_family(hs, ctx.tol);
  r.results["generators"] = names;
  r.results["times"] = f.times();
  ordered_json slots = ordered_json::array();
  for (std::size_t k = 0; k < f.size(); ++k) {
    ordered_json members = ordered_json::array();
    const Decomposition& d = f.slot(k);
    for (std::size_t i = 0; i < d.size(); ++i) {
      members.push_back({{"label", d.labels()[i]}, {"rank", d[i].rank()}});
    }
    slots.push_back({{"time", f.times()[k]}, {"members", members}});
  }
  r.results["slots"] = slots;
  r.results["elementary_count"] = f.elementary_count();
  r.summary = std::to_string(f.elementary_count()) + " elementary histories";
}

void compatible(const Context& ctx, const std::string& a, const std::string& b,
                Report& r) {
  const CompatibilityResult c = are_compatible(
      ctx.s().families.at(a), ctx.s().families.at(b), ctx.rho(), ctx.tol);
  r.results["family_a"] = a;
  r.results["family_b"] = b;
  r.results["compatible"] = c.compatible;
  r.results["reason"] = to_string(c.reason);
  if (c.slot) r.results["slot"] = *c.slot;
  r.results["refinement_max_off_diagonal_re"] = c.refinement_max_off_diagonal_re;
  r.summary = c.compatible ? "compatible" : "incompatible (" + to_string(c.reason) + ")";
  r.exit_status = c.compatible ? kExitAffirmative : kExitNegative;
}

struct ContraryFlags {
  std::optional<int> dim;
  std::optional<std::size_t> trials;
  std::optional<std::string> strategy;
  bool higher_rank = false;
  std::size_t max_certificates = 10;
};

void find_contrary(const Context& ctx, const Globals& g, const ContraryFlags& fl,
                   Report& r) {
  SearchOptions o;
  o.tol = ctx.tol;
  o.seed = 1;
  if (ctx.scenario) {
    const SearchSettings& ss = ctx.scenario->search;
    o.dim = ss.dim;
    o.trials = ss.trials;
    o.seed = ss.seed;
    o.allow_higher_rank = ss.allow_higher_rank;
    o.strategy = ss.constrained ? SearchStrategy::Constrained : SearchStrategy::Haar;
    for (const QuadrupleNames& q : ss.planted) {
      const auto& p = ctx.scenario->projectors;
      o.planted.push_back({p.at(q.e0), p.at(q.e1), p.at(q.f1), p.at(q.e2)});
    }
  }
  if (fl.dim) o.dim = *fl.dim;
  if (fl.trials) o.trials = *fl.trials;
  if (g.seed) o.seed = *g.seed;
  if (fl.strategy) {
    o.strategy = *fl.strategy == "haar" ? SearchStrategy::Haar : SearchStrategy::Constrained;
  }
  o.allow_higher_rank = o.allow_higher_rank || fl.higher_rank;
  if (!o.planted.empty() && o.planted.front().e0.dim() != o.dim) {
    r.warnings.push_back("planted quadruples skipped: dimension differs from search");
    o.planted.clear();
  }

  const SearchResult res = find_contrary_inferences(o);
  r.results["dim"] = o.dim;
  r.results["trials"] = o.trials;
  r.results["planted"] = o.planted.size();
  r.results["seed"] = o.seed;
  r.results["strategy"] = o.strategy == SearchStrategy::Haar ? "haar" : "constrained";
  r.results["allow_higher_rank"] = o.allow_higher_rank;
  r.results["certificates_found"] = res.certificates.size();
  r.results["marginal"] = res.marginal;
  ordered_json certs = ordered_json::array();
  for (std::size_t i = 0; i < res.certificates.size() && i < fl.max_certificates; ++i) {
    ordered_json c = certificate_json(res.certificates[i]);
    c["trial"] = res.trial_indices[i];
    certs.push_back(std::move(c));
  }
  r.results["certificates"] = certs;
  if (res.certificates.size() > fl.max_certificates) {
    r.warnings.push_back("only the first " + std::to_string(fl.max_certificates) +
                         " certificates are listed");
  }
  r.summary = std::to_string(res.certificates.size()) + " contrary inferences in " +
              std::to_string(res.trials_run) + " trials";
  r.exit_status = res.certificates.empty() ? kExitNegative : kExitAffirmative;
}

void ordered_check(const Context& ctx, const std::string& history,
                   const std::vector<std::string>& catalog, Report& r) {
  if (catalog.empty()) throw InvalidArgument("ordered-check needs a catalog of families");
  std::vector<Family> families;
  for (const auto& n : catalog) families.push_back(ctx.s().families.at(n));
  const OrderedConsistencyVerdict v = is_ordered_consistent(
      ctx.s().histories.at(history), families, ctx.rho(), ctx.tol);
  r.results["history"] = history;
  r.results["catalog"] = catalog;
  r.results["ordered_consistent"] = v.ordered_consistent;
  r.results["comparisons"] = v.comparisons;
  if (v.violating_pair) {
    const OrderedViolation& p = *v.violating_pair;
    r.results["violating_pair"] = {
        {"history", v.history.describe()},
        {"dominator", p.dominator.describe()},
        {"family", catalog[p.family_index]},
        {"weight_history", p.weight_history},
        {"weight_dominator", p.weight_dominator}};
  }
  r.summary = v.ordered_consistent ? "ordered consistent" : "not ordered consistent";
  r.exit_status = v.ordered_consistent ? kExitAffirmative : kExitNegative;
}

struct SimulationFlags {
  std::vector<std::string> catalog;
  std::vector<double> weights;
  std::optional<std::size_t> ensemble_size;
  std::vector<std::string> axiom3;
  std::string export_path;
};

std::pair<History, History> history_pair(const Scenario& s, const std::string& a,
                                         const std::string& b) {
  return {s.histories.at(a), s.histories.at(b)};
}

void simulate_support(const Context& ctx, const Globals& g,
                      const SimulationFlags& fl, Report& r) {
  const Scenario& s = ctx.s();
  const SimulationSettings& sim = s.simulation;
  const std::vector<std::string> names = fl.catalog.empty() ? sim.catalog : fl.catalog;
  if (names.empty()) throw InvalidArgument("simulate-support needs a catalog");
  std::vector<Family> catalog;
  for (const auto& n : names) catalog.push_back(s.families.at(n));

  SupportOptions o;
  o.tol = ctx.tol;
  o.seed = g.seed ? *g.seed : sim.seed;
  o.ensemble_size = fl.ensemble_size ? *fl.ensemble_size : sim.ensemble_size;
  if (!fl.weights.empty()) {
    o.weights = fl.weights;
  } else if (fl.catalog.empty()) {
    o.weights = sim.weights;
  }
  std::vector<std::pair<std::string, std::string>> pair_names = sim.axiom3_pairs;
  for (const auto& spec : fl.axiom3) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos) throw InvalidArgument("--axiom3 takes E:F");
    pair_names.emplace_back(spec.substr(0, colon), spec.substr(colon + 1));
  }
  for (const auto& [a, b] : pair_names) o.axiom3_pairs.push_back(history_pair(s, a, b));

  const SupportModel model = SupportModel::build(catalog, names, ctx.rho(), o);
  bool ok = true;

  ordered_json cat = ordered_json::array();
  for (std::size_t c = 0; c < names.size(); ++c) {
    std::size_t support = 0;
    for (const SystemRecord& rec : model.systems()) support += rec.member(c);
    cat.push_back({{"family", names[c]},
                   {"weight", model.weights()[c]},
                   {"maximal", model.is_maximal(c)},
                   {"support", support}});
  }
  r.results["catalog"] = cat;
  r.results["ensemble_size"] = model.size();
  r.results["seed"] = o.seed;

  const AxiomReport a1 = check_axiom1(model);
  const AxiomReport a2 = check_axiom2(model, Exec::Parallel, s.enumeration_cap);
  const AxiomReport part = check_partition(model, Exec::Parallel, s.enumeration_cap);
  r.results["axiom1"] = axiom_json(a1);
  r.results["axiom2"] = axiom_json(a2);
  r.results["partition"] = axiom_json(part);
  ok = ok && a1.holds() && a2.holds() && part.holds();

  const FrequencyReport freq = check_frequencies(model);
  ordered_json rows = ordered_json::array();
  for (const FrequencyRow& row : freq.rows) {
    rows.push_back({{"family", names[row.family]},
                    {"history", row.history},
                    {"count", row.count},
                    {"population", row.population},
                    {"expected", row.expected},
                    {"observed", row.observed},
                    {"sigma", row.sigma},
                    {"checked", row.checked},
                    {"within_3sigma", row.within_3sigma},
                    {"within_5_over_sqrt_n", row.within_5_over_sqrt_n}});
  }
  r.results["frequencies"] = {{"holds", freq.holds()}, {"rows", rows}};
  ok = ok && freq.holds();

  if (sim.contrary_h0 && sim.contrary_e1 && sim.contrary_f1) {
    const History& h0 = s.histories.at(*sim.contrary_h0);
    const History& e1 = s.histories.at(*sim.contrary_e1);
    const History& f1 = s.histories.at(*sim.contrary_f1);
    const std::vector<Time> triple(kTripleTimes.begin(), kTripleTimes.end());
    const std::vector<Time> outer{kTripleTimes[0], kTripleTimes[2]};
    const std::vector<Time> mid{kTripleTimes[1]};
    if (h0.times() != outer || e1.times() != mid || f1.times() != mid) {
      r.warnings.push_back("contrary analysis skipped: h0 must sit at times 0 and 2 "
                           "and the middle events at time 1");
    } else {
      ordered_json cj;
      const ContraryInferenceCertificate cert = kent_triple_check(
          h0.event(0), e1.event(0), f1.event(0), h0.event(1), ctx.rho(), ctx.tol);
      const auto i1 = model.find_family(cert.family_c1);
      const auto i2 = model.find_family(cert.family_c2);
      if (i1 && i2) {
        const bool c8 = check_condition8(model, *i1, *i2, h0);
        cj["condition8"] = c8;
        ok = ok && c8;
      } else {
        r.warnings.push_back("condition (8) skipped: catalog lacks C1 or C2");
      }
      try {
        const CaseCounts cc = classify_cases(model, cert);
        cj["cases"] = {{"in_scope", cc.in_scope}, {"p1", cc.p1}, {"p2", cc.p2},
                       {"q1", cc.q1},             {"q2", cc.q2}, {"r", cc.r},
                       {"overlap", cc.overlap},   {"anomalies", cc.anomalies},
                       {"partition", cc.is_partition()}};
        ok = ok && cc.is_partition();
      } catch (const CatalogMissingFamily& e) {
        r.warnings.push_back(std::string("case analysis skipped: ") + e.what());
      }
      const Proposition1Report p1 = proposition1_check(model, e1, f1);
      cj["proposition1"] = {{"holds", p1.holds},
                            {"double_occurrences", p1.double_occurrences},
                            {"antecedent_checked", p1.antecedent_checked},
                            {"antecedent_violations", p1.antecedent_violations}};
      ok = ok && p1.holds;
      cj["systems_defining_h1_and_h2"] =
          count_defining_both(model, cert.h1(), cert.h2());
      r.results["contrary"] = cj;
    }
  }

  if (!o.axiom3_pairs.empty()) {
    ordered_json reports = ordered_json::array();
    for (std::size_t i = 0; i < o.axiom3_pairs.size(); ++i) {
      const auto& [e, f] = o.axiom3_pairs[i];
      const Axiom3Report a3 = check_axiom3_variant(model, e, f);
      reports.push_back({{"e", pair_names[i].first},
                         {"f", pair_names[i].second},
                         {"clause_i_violations", a3.clause_i_violations},
                         {"clause_ii_violations", a3.clause_ii_violations},
                         {"p2_type", a3.p2_type},
                         {"proposition1_holds", a3.proposition1_holds}});
      ok = ok && a3.holds() && a3.proposition1_holds;
    }
    r.results["axiom3"] = reports;
  }

  if (!fl.export_path.empty()) {
    std::ofstream out(fl.export_path, std::ios::binary);
    if (!out) throw InvalidArgument("cannot write '" + fl.export_path + "'");
    out << export_ensemble(model);
    r.results["exported_to"] = fl.export_path;
  }
  r.summary = ok ? "all checks hold" : "some checks failed";
  r.exit_status = ok ? kExitAffirmative : kExitNegative;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioError("cannot read scenario file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Consistent-histories toolkit", "cohist"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--scenario", g.scenario_path, "Scenario JSON file");
  app.add_option("--tol", g.tol, "Numerical tolerance")->check(CLI::PositiveNumber);
  app.add_option("--seed", g.seed, "Random seed");
  app.add_option("--format", g.format, "Output format")
      ->check(CLI::IsMember({"human", "machine"}));

  std::vector<std::string> pos;
  ContraryFlags cf;
  SimulationFlags sf;
  const auto sub = [&](const char* name, const char* help) {
    CLI::App* s = app.add_subcommand(name, help);
    s->fallthrough();
    return s;
  };
  auto* cc = sub("check-consistency", "Weak decoherence of a family");
  cc->add_option("family", pos)->required()->expected(1);
  auto* pr = sub("prob", "Probability of a history in a family");
  pr->add_option("names", pos, "FAMILY HISTORY")->required()->expected(2);
  auto* co = sub("conditional", "Conditional probability inside a family");
  co->add_option("names", pos, "FAMILY TARGET GIVEN")->required()->expected(3);
  auto* gf = sub("generate-family", "Family generated by histories");
  gf->add_option("histories", pos)->required();
  auto* cp = sub("compatible", "Whether two families are compatible");
  cp->add_option("families", pos, "FAMILY_A FAMILY_B")->required()->expected(2);
  auto* fc = sub("find-contrary", "Search for contrary inferences");
  fc->add_option("--dim", cf.dim, "Hilbert space dimension");
  fc->add_option("--trials", cf.trials, "Random trials");
  fc->add_option("--strategy", cf.strategy, "constrained or haar")
      ->check(CLI::IsMember({"constrained", "haar"}));
  fc->add_flag("--higher-rank", cf.higher_rank, "Allow projectors of rank > 1");
  fc->add_option("--max-certificates", cf.max_certificates, "Certificates listed");
  auto* oc = sub("ordered-check", "Ordered consistency against a catalog");
  oc->add_option("names", pos, "HISTORY FAMILY...")->required()->expected(1, -1);
  auto* ss = sub("simulate-support", "Support-model simulation and checks");
  ss->add_option("--catalog", sf.catalog, "Catalog family names");
  ss->add_option("--weights", sf.weights, "Membership weights");
  ss->add_option("--ensemble-size", sf.ensemble_size, "Number of systems");
  ss->add_option("--axiom3", sf.axiom3, "Event pair E:F enforced jointly");
  ss->add_option("--export", sf.export_path, "Write the ensemble table here");

  std::vector<const char*> argv{"cohist"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitAffirmative : kExitInputError;
  }

  CLI::App* chosen = app.get_subcommands().front();
  Report r;
  r.command = chosen->get_name();
  r.arguments = args;
  const bool machine = g.format == "machine";
  try {
    Context ctx;
    std::string scenario_bytes;
    if (!g.scenario_path.empty()) {
      scenario_bytes = read_file(g.scenario_path);
      ctx.scenario = parse_scenario_text(scenario_bytes);
      ctx.tol = ctx.scenario->tol;
    }
    if (g.tol) ctx.tol = *g.tol;
    r.settings["tol"] = ctx.tol;
    if (g.seed) r.settings["seed"] = *g.seed;
    std::string material = scenario_bytes;
    for (const auto& a : args) material += '\0' + a;
    r.inputs_digest = "sha256:" + sha256_hex(material);

    const std::string& cmd = r.command;
    if (cmd == "check-consistency") {
      check_consistency(ctx, pos[0], r);
    } else if (cmd == "prob") {
      prob(ctx, pos[0], pos[1], r);
    } else if (cmd == "conditional") {
      conditional(ctx, pos[0], pos[1], pos[2], r);
    } else if (cmd == "generate-family") {
      generate(ctx, pos, r);
    } else if (cmd == "compatible") {
      compatible(ctx, pos[0], pos[1], r);
    } else if (cmd == "find-contrary") {
      find_contrary(ctx, g, cf, r);
    } else if (cmd == "ordered-check") {
      ordered_check(ctx, pos[0], {pos.begin() + 1, pos.end()}, r);
    } else if (cmd == "simulate-support") {
      simulate_support(ctx, g, sf, r);
    }
  } catch (const std::exception& e) {
    r.results = {{"error", e.what()}};
    r.summary = "error";
    r.exit_status = kExitInputError;
    if (!machine) {
      err << "cohist " << r.command << ": " << e.what() << '\n';
      return kExitInputError;
    }
  }
  out << (machine ? render_machine(r) : render_human(r));
  return r.exit_status;
}

}  // namespace cohist
