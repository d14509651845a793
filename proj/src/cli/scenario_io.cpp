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

#include "cohist/scenario_io.hpp"

#include <fstream>
#include <sstream>

#include "cohist/family_algebra.hpp"

namespace cohist {

namespace {

const char* const kSections[] = {
    "dim",       "tol",       "allow_zero_members", "enumeration_cap",
    "vectors",   "projectors", "decompositions",    "histories",
    "families",  "rho",        "search",            "simulation"};

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ScenarioError(where + ": " + what);
}

const ordered_json& require(const ordered_json& obj, const char* key,
                            const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) fail(where, std::string("missing '") + key + "'");
  return *it;
}

template <class T>
const T& resolve(const NamedTable<T>& table, const ordered_json& section,
                 const ordered_json& ref, const std::string& kind,
                 const std::string& where) {
  if (!ref.is_string()) fail(where, kind + " reference must be a name");
  const std::string name = ref.get<std::string>();
  if (const T* v = table.find(name)) return *v;
  if (section.is_object() && section.contains(name)) {
    fail(where, "forward reference to " + kind + " '" + name + "'");
  }
  fail(where, "unknown " + kind + " '" + name + "'");
}

Complex complex_from_json(const ordered_json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    fail(where, "complex numbers are [re, im] pairs");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

Vector vector_from_json(const ordered_json& j, int dim, const std::string& where) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim) {
    fail(where, "expected " + std::to_string(dim) + " entries");
  }
  Vector v(dim);
  for (int i = 0; i < dim; ++i) v(i) = complex_from_json(j[i], where);
  return v;
}

std::vector<std::string> names_of(const ordered_json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected a list of names");
  std::vector<std::string> out;
  for (const auto& x : j) {
    if (!x.is_string()) fail(where, "expected a list of names");
    out.push_back(x.get<std::string>());
  }
  return out;
}

template <class T>
T number(const ordered_json& obj, const char* key, T fallback,
         const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if constexpr (std::is_same_v<T, bool>) {
    if (!it->is_boolean()) fail(where, std::string("'") + key + "' must be a boolean");
  } else if constexpr (std::is_floating_point_v<T>) {
    if (!it->is_number()) fail(where, std::string("'") + key + "' must be a number");
  } else {
    if (!it->is_number_integer() || it->template get<std::int64_t>() < 0) {
      fail(where, std::string("'") + key + "' must be a nonnegative integer");
    }
  }
  return it->get<T>();
}

void check_keys(const ordered_json& obj, std::initializer_list<const char*> keys,
                const std::string& where) {
  for (const auto& [k, v] : obj.items()) {
    bool known = false;
    for (const char* key : keys) known = known || k == key;
    if (!known) fail(where, "unknown key '" + k + "'");
  }
}

Projector parse_projector(const Scenario& s, const ordered_json& section,
                          const ordered_json& spec, const std::string& where) {
  if (!spec.is_object() || spec.size() != 1) {
    fail(where, "projector needs exactly one of span, matrix, complement, "
                "identity or zero");
  }
  const auto& [kind, value] = *spec.items().begin();
  if (kind == "span") {
    if (!value.is_array() || value.empty()) fail(where, "span needs vectors");
    std::vector<Vector> vs;
    for (const auto& v : value) {
      if (v.is_string()) {
        vs.push_back(resolve(s.vectors, ordered_json(), v, "vector", where));
      } else {
        vs.push_back(vector_from_json(v, s.dim, where));
      }
    }
    return projector_from_vectors(vs, s.tol);
  }
  if (kind == "matrix") return Projector::from_matrix(matrix_from_json(value, s.dim), s.tol);
  if (kind == "complement") {
    return complement(resolve(s.projectors, section, value, "projector", where));
  }
  if (kind == "identity" || kind == "zero") {
    if (value != true) fail(where, kind + " must be true");
    return kind == "identity" ? Projector::identity(s.dim) : Projector::zero(s.dim);
  }
  fail(where, "unknown projector form '" + kind + "'");
}

Family parse_family(const Scenario& s, const ordered_json& section,
                    const ordered_json& spec, const std::string& where) {
  if (!spec.is_object()) fail(where, "family must be an object");
  if (spec.contains("slots")) {
    check_keys(spec, {"slots", "times"}, where);
    std::vector<Decomposition> slots;
    for (const auto& ref : require(spec, "slots", where)) {
      slots.push_back(resolve(s.decompositions, ordered_json(), ref,
                              "decomposition", where));
    }
    std::vector<Time> times;
    if (spec.contains("times")) {
      times = spec["times"].get<std::vector<Time>>();
    } else {
      for (std::size_t k = 0; k < slots.size(); ++k) times.push_back(static_cast<Time>(k));
    }
    return Family(std::move(slots), std::move(times));
  }
  if (spec.contains("generated_by")) {
    check_keys(spec, {"generated_by"}, where);
    std::vector<History> hs;
    for (const auto& ref : spec["generated_by"]) {
      hs.push_back(resolve(s.histories, ordered_json(), ref, "history", where));
    }
    return generated_family(hs, s.tol);
  }
  if (spec.contains("refine")) {
    check_keys(spec, {"refine"}, where);
    const auto& refs = spec["refine"];
    if (!refs.is_array() || refs.size() != 2) fail(where, "refine takes two families");
    return common_refinement(resolve(s.families, section, refs[0], "family", where),
                             resolve(s.families, section, refs[1], "family", where),
                             s.tol);
  }
  fail(where, "family needs slots, generated_by or refine");
}

void parse_search(Scenario& s, const ordered_json& j) {
  const std::string where = "search";
  if (!j.is_object()) fail(where, "must be an object");
  check_keys(j, {"dim", "trials", "seed", "strategy", "allow_higher_rank", "planted"},
             where);
  SearchSettings& out = s.search;
  out.dim = static_cast<int>(number<std::uint64_t>(j, "dim", s.dim, where));
  out.trials = number<std::size_t>(j, "trials", out.trials, where);
  out.seed = number<std::uint64_t>(j, "seed", out.seed, where);
  out.allow_higher_rank = number<bool>(j, "allow_higher_rank", false, where);
  if (j.contains("strategy")) {
    const std::string strategy = j["strategy"].get<std::string>();
    if (strategy != "constrained" && strategy != "haar") {
      fail(where, "strategy must be constrained or haar");
    }
    out.constrained = strategy == "constrained";
  }
  if (j.contains("planted")) {
    for (const auto& q : j["planted"]) {
      const auto names = names_of(q, where + ".planted");
      if (names.size() != 4) fail(where, "planted entries are [E0, E1, F1, E2]");
      for (const auto& n : names) {
        (void)resolve(s.projectors, ordered_json(), n, "projector", where);
      }
      out.planted.push_back({names[0], names[1], names[2], names[3]});
    }
  }
}

void parse_simulation(Scenario& s, const ordered_json& j) {
  const std::string where = "simulation";
  if (!j.is_object()) fail(where, "must be an object");
  check_keys(j, {"catalog", "weights", "ensemble_size", "seed", "axiom3_pairs",
                 "contrary"},
             where);
  SimulationSettings& out = s.simulation;
  if (j.contains("catalog")) {
    out.catalog = names_of(j["catalog"], where);
    for (const auto& n : out.catalog) {
      (void)resolve(s.families, ordered_json(), n, "family", where);
    }
  }
  if (j.contains("weights")) out.weights = j["weights"].get<std::vector<double>>();
  out.ensemble_size = number<std::size_t>(j, "ensemble_size", out.ensemble_size, where);
  out.seed = number<std::uint64_t>(j, "seed", out.seed, where);
  if (j.contains("axiom3_pairs")) {
    for (const auto& pair : j["axiom3_pairs"]) {
      const auto names = names_of(pair, where + ".axiom3_pairs");
      if (names.size() != 2) fail(where, "axiom3_pairs entries are [E, F]");
      for (const auto& n : names) {
        (void)resolve(s.histories, ordered_json(), n, "history", where);
      }
      out.axiom3_pairs.emplace_back(names[0], names[1]);
    }
  }
  if (j.contains("contrary")) {
    const auto& c = j["contrary"];
    check_keys(c, {"h0", "e1", "f1"}, where + ".contrary");
    for (const char* key : {"h0", "e1", "f1"}) {
      (void)resolve(s.histories, ordered_json(),
                    require(c, key, where + ".contrary"), "history", where);
    }
    out.contrary_h0 = c["h0"].get<std::string>();
    out.contrary_e1 = c["e1"].get<std::string>();
    out.contrary_f1 = c["f1"].get<std::string>();
  }
}

}  // namespace

ordered_json complex_to_json(Complex z) {
  return ordered_json::array({z.real(), z.imag()});
}

ordered_json matrix_to_json(const Matrix& m) {
  ordered_json rows = ordered_json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const ordered_json& j, int dim) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim) {
    throw ScenarioError("matrix must have " + std::to_string(dim) + " rows");
  }
  Matrix m(dim, dim);
  for (int r = 0; r < dim; ++r) {
    const Vector row = vector_from_json(j[r], dim, "matrix row");
    m.row(r) = row.transpose();
  }
  return m;
}

Scenario parse_scenario(const ordered_json& doc) {
  if (!doc.is_object()) throw ScenarioError("scenario must be a JSON object");
  for (const auto& [k, v] : doc.items()) {
    bool known = false;
    for (const char* s : kSections) known = known || k == s;
    if (!known) throw ScenarioError("unknown scenario key '" + k + "'");
  }
  Scenario s;
  const auto dim = require(doc, "dim", "scenario");
  if (!dim.is_number_integer() || dim.get<int>() < 1 || dim.get<int>() > kMaxDim) {
    throw ScenarioError("dim must be an integer in [1, " + std::to_string(kMaxDim) + "]");
  }
  s.dim = dim.get<int>();
  s.tol = number<double>(doc, "tol", s.tol, "scenario");
  if (!(s.tol > 0.0)) throw ScenarioError("tol must be positive");
  s.allow_zero_members = number<bool>(doc, "allow_zero_members", false, "scenario");
  s.enumeration_cap = number<std::size_t>(doc, "enumeration_cap", s.enumeration_cap, "scenario");

  const auto section = [&](const char* key) -> const ordered_json& {
    static const ordered_json empty = ordered_json::object();
    const auto it = doc.find(key);
    if (it == doc.end()) return empty;
    if (!it->is_object()) throw ScenarioError(std::string(key) + " must be an object");
    return *it;
  };

  for (const auto& [name, v] : section("vectors").items()) {
    s.vectors.add(name, vector_from_json(v, s.dim, "vector '" + name + "'"));
  }
  const auto& projectors = section("projectors");
  for (const auto& [name, spec] : projectors.items()) {
    s.projectors.add(name, parse_projector(s, projectors, spec, "projector '" + name + "'"));
  }
  for (const auto& [name, spec] : section("decompositions").items()) {
    const std::string where = "decomposition '" + name + "'";
    std::vector<std::string> refs;
    std::vector<std::string> labels;
    if (spec.is_object()) {
      check_keys(spec, {"members", "labels"}, where);
      refs = names_of(require(spec, "members", where), where);
      if (spec.contains("labels")) labels = names_of(spec["labels"], where);
    } else {
      refs = names_of(spec, where);
    }
    std::vector<Projector> members;
    for (const auto& r : refs) {
      members.push_back(resolve(s.projectors, ordered_json(), ordered_json(r), "projector", where));
    }
    if (labels.empty()) labels = refs;
    s.decompositions.add(name, Decomposition::validate(std::move(members), s.tol,
                                                       std::move(labels),
                                                       s.allow_zero_members));
  }
  for (const auto& [name, spec] : section("histories").items()) {
    const std::string where = "history '" + name + "'";
    if (!spec.is_object()) fail(where, "history must be an object");
    check_keys(spec, {"events", "times"}, where);
    const auto refs = names_of(require(spec, "events", where), where);
    std::vector<Projector> events;
    for (const auto& r : refs) {
      events.push_back(resolve(s.projectors, ordered_json(), ordered_json(r), "projector", where));
    }
    if (spec.contains("times")) {
      s.histories.add(name, History(std::move(events), spec["times"].get<std::vector<Time>>(), refs));
    } else {
      s.histories.add(name, History::sequential(std::move(events), refs));
    }
  }
  const auto& families = section("families");
  for (const auto& [name, spec] : families.items()) {
    s.families.add(name, parse_family(s, families, spec, "family '" + name + "'"));
  }
  if (doc.contains("rho")) {
    s.rho = DensityMatrix::from_matrix(matrix_from_json(doc["rho"], s.dim), s.tol);
  }
  if (doc.contains("search")) parse_search(s, doc["search"]);
  if (doc.contains("simulation")) parse_simulation(s, doc["simulation"]);
  return s;
}

Scenario parse_scenario_text(std::string_view text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ScenarioError(std::string("malformed JSON: ") + e.what());
  } catch (const nlohmann::json::exception& e) {
    throw ScenarioError(e.what());
  }
  try {
    return parse_scenario(doc);
  } catch (const nlohmann::json::exception& e) {
    throw ScenarioError(std::string("bad value: ") + e.what());
  }
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioError("cannot read scenario file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario_text(buf.str());
}

ordered_json certificate_fragment(const ContraryInferenceCertificate& c) {
  ordered_json j;
  j["dim"] = c.e0.dim();
  j["tol"] = c.tol;
  ordered_json& p = j["projectors"];
  p["I"] = {{"identity", true}};
  p["E0"] = {{"matrix", matrix_to_json(c.e0.matrix())}};
  p["E1"] = {{"matrix", matrix_to_json(c.e1.matrix())}};
  p["F1"] = {{"matrix", matrix_to_json(c.f1.matrix())}};
  p["E2"] = {{"matrix", matrix_to_json(c.e2.matrix())}};
  const ordered_json times = ordered_json::array({kTripleTimes[0], kTripleTimes[1], kTripleTimes[2]});
  ordered_json& h = j["histories"];
  h["h0"] = {{"times", times}, {"events", {"E0", "I", "E2"}}};
  h["h1"] = {{"times", times}, {"events", {"E0", "E1", "E2"}}};
  h["h2"] = {{"times", times}, {"events", {"E0", "F1", "E2"}}};
  j["families"]["C1"] = {{"generated_by", {"h1"}}};
  j["families"]["C2"] = {{"generated_by", {"h2"}}};
  return j;
}

}  // namespace cohist
