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

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "cohist/cli.hpp"
#include "cohist/family_algebra.hpp"
#include "cohist/report.hpp"
#include "cohist/scenario_io.hpp"
#include "test_util.hpp"

namespace cohist {
namespace {

const std::string kFixture = std::string(COHIST_FIXTURE_DIR) + "/three_box.json";

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args, bool with_fixture = true) {
  if (with_fixture) args.insert(args.begin(), {"--scenario", kFixture});
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

CliRun machine(std::vector<std::string> args) {
  args.insert(args.begin(), {"--format", "machine"});
  return run(std::move(args));
}

ordered_json results_of(const CliRun& r) { return ordered_json::parse(r.out).at("results"); }

TEST(Cli, CheckConsistency) {
  EXPECT_EQ(run({"check-consistency", "C1"}).code, kExitAffirmative);
  EXPECT_EQ(run({"check-consistency", "joint"}).code, kExitNegative);
  const CliRun missing = run({"check-consistency", "nope"});
  EXPECT_EQ(missing.code, kExitInputError);
  EXPECT_NE(missing.err.find("nope"), std::string::npos);
  const CliRun m = machine({"check-consistency", "joint"});
  EXPECT_EQ(m.code, kExitNegative);
  EXPECT_EQ(ordered_json::parse(m.out).at("exit_status"), 1);
}

TEST(Cli, Probabilities) {
  const CliRun p = machine({"prob", "C1", "h0"});
  ASSERT_EQ(p.code, kExitAffirmative) << p.out << p.err;
  const std::string dumped = results_of(p).dump();
  EXPECT_NE(dumped.find("0.037037037037"), std::string::npos) << dumped;
  EXPECT_EQ(results_of(machine({"prob", "C1", "top"})).at("probability").get<double>(), 1.0);
  EXPECT_EQ(run({"prob", "C1", "h2"}).code, kExitInputError);
  EXPECT_EQ(run({"prob", "joint", "h1"}).code, kExitInputError);
  EXPECT_EQ(run({"conditional", "C1", "e1_t1", "h0"}).code, kExitAffirmative);
}

TEST(Cli, GenerateAndCompatible) {
  const CliRun g = machine({"generate-family", "e1_t1", "f1_t1"});
  ASSERT_EQ(g.code, kExitAffirmative) << g.out;
  EXPECT_EQ(run({"compatible", "C1", "C2"}).code, kExitNegative);
  EXPECT_EQ(run({"compatible", "C1", "C1"}).code, kExitAffirmative);
}

TEST(Cli, OrderedCheck) {
  EXPECT_EQ(run({"ordered-check", "h1", "C1", "C2"}).code, kExitNegative);
  EXPECT_EQ(run({"ordered-check", "top", "C1", "C2"}).code, kExitAffirmative);
}

TEST(Cli, FindContrary) {
  const CliRun r = machine({"find-contrary", "--trials", "50"});
  EXPECT_EQ(r.code, kExitAffirmative);
  EXPECT_EQ(run({"find-contrary", "--dim", "9"}).code, kExitInputError);
  EXPECT_EQ(run({"find-contrary", "--strategy", "bogus"}).code, kExitInputError);
  const CliRun haar = run({"find-contrary", "--dim", "4", "--trials", "20", "--strategy", "haar"},
                       false);
  EXPECT_EQ(haar.code, kExitNegative);
}

TEST(Cli, SimulateSupport) {
  const CliRun r = machine({"simulate-support", "--ensemble-size", "20000"});
  EXPECT_EQ(r.code, kExitAffirmative) << r.out;
  const std::string path = ::testing::TempDir() + "cohist_ensemble.tsv";
  const CliRun e = run({"simulate-support", "--ensemble-size", "100", "--export", path});
  EXPECT_EQ(e.code, kExitAffirmative) << e.out << e.err;
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "system\tfamily\trealized");
  std::remove(path.c_str());

  const CliRun a3 = run({"simulate-support", "--catalog", "C1", "C2", "Ch0", "CEF", "--weights",
                      "1", "1", "1", "0", "--axiom3", "e1_t1:f1_t1", "--ensemble-size",
                      "20000"});
  EXPECT_EQ(a3.code, kExitAffirmative) << a3.out;
  EXPECT_EQ(run({"simulate-support", "--axiom3", "e1_t1"}).code, kExitInputError);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}, false).code, kExitInputError);
  EXPECT_EQ(run({"no-such-command"}, false).code, kExitInputError);
  EXPECT_EQ(run({"prob", "C1"}).code, kExitInputError);
  EXPECT_EQ(run({"--scenario", "/nonexistent.json", "check-consistency", "C1"}, false).code,
            kExitInputError);
  const CliRun m = run({"--format", "machine", "--scenario", "/nonexistent.json",
                     "check-consistency", "C1"},
                    false);
  EXPECT_EQ(m.code, kExitInputError);
  EXPECT_TRUE(ordered_json::parse(m.out).at("results").contains("error"));
}

TEST(Cli, MachineOutputRoundTripsAndIsReproducible) {
  for (const std::vector<std::string>& args :
       {std::vector<std::string>{"prob", "C1", "h0"},
        std::vector<std::string>{"find-contrary", "--trials", "30"},
        std::vector<std::string>{"simulate-support", "--ensemble-size", "5000"}}) {
    const CliRun a = machine(args);
    const CliRun b = machine(args);
    EXPECT_EQ(a.out, b.out);
    const Report r = report_from_json(ordered_json::parse(a.out));
    EXPECT_EQ(render_machine(r), a.out);
    EXPECT_EQ(r.exit_status, a.code);
    EXPECT_EQ(r.inputs_digest.rfind("sha256:", 0), 0u);
  }
  EXPECT_NE(ordered_json::parse(machine({"prob", "C1", "h0"}).out).at("inputs_digest"),
            ordered_json::parse(machine({"prob", "C1", "h1"}).out).at("inputs_digest"));
}

TEST(Cli, HumanOutput) {
  const CliRun r = run({"prob", "C1", "h0"});
  EXPECT_NE(r.out.find("prob: "), std::string::npos);
  EXPECT_NE(r.out.find("0.037037"), std::string::npos);
  EXPECT_EQ(r.out.find("0.0370370370"), std::string::npos);
  EXPECT_NE(r.out.find("inputs sha256:"), std::string::npos);
}

TEST(Report, Rounding) {
  EXPECT_EQ(round_significant(1.0 / 3.0, 3), 0.333);
  EXPECT_EQ(round_significant(0.0, 5), 0.0);
  const ordered_json j = round_numbers(ordered_json{{"x", 2.0 / 3.0}, {"n", 7}}, 2);
  EXPECT_EQ(j.at("x").get<double>(), 0.67);
  EXPECT_EQ(j.at("n"), 7);
  EXPECT_THROW(report_from_json(ordered_json{{"command", "x"}}), ScenarioError);
  EXPECT_EQ(sha256_hex(""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST(Scenario, FixtureFileMatchesBuiltInFixture) {
  const Scenario file = load_scenario(kFixture);
  const Scenario code = three_box_fixture();
  EXPECT_EQ(file.dim, code.dim);
  EXPECT_EQ(file.tol, code.tol);
  for (const auto& [name, p] : code.projectors.entries()) {
    EXPECT_TRUE(approx_equal(file.projectors.at(name).matrix(), p.matrix(), 1e-12)) << name;
  }
  for (const auto& [name, f] : code.families.entries()) {
    EXPECT_TRUE(equivalent(file.families.at(name), f, 1e-10)) << name;
  }
  for (const auto& [name, h] : code.histories.entries()) {
    EXPECT_EQ(file.histories.at(name).times(), h.times()) << name;
  }
  EXPECT_EQ(file.search.trials, code.search.trials);
  EXPECT_EQ(file.search.seed, code.search.seed);
  EXPECT_EQ(file.simulation.seed, code.simulation.seed);
  EXPECT_EQ(file.simulation.catalog, code.simulation.catalog);
  EXPECT_EQ(file.simulation.weights, code.simulation.weights);
  EXPECT_EQ(file.simulation.ensemble_size, code.simulation.ensemble_size);
}

TEST(Scenario, Rejections) {
  EXPECT_THROW(parse_scenario_text("{"), ScenarioError);
  EXPECT_THROW(parse_scenario_text(R"({"dim": 0})"), ScenarioError);
  EXPECT_THROW(parse_scenario_text(R"({"dim": 2, "bogus": 1})"), ScenarioError);
  EXPECT_THROW(parse_scenario_text(R"({"dim": 2, "tol": -1})"), ScenarioError);
  try {
    parse_scenario_text(R"({"dim": 2,
      "projectors": {"A": {"complement": "B"}, "B": {"identity": true}}})");
    FAIL() << "forward reference accepted";
  } catch (const ScenarioError& e) {
    EXPECT_NE(std::string(e.what()).find("forward reference"), std::string::npos);
  }
  EXPECT_THROW(parse_scenario_text(R"({"dim": 2,
      "projectors": {"A": {"matrix": [[[0.5, 0], [0, 0]], [[0, 0], [0, 0]]]}}})"),
               NotAProjector);
}

TEST(Scenario, InlineDefinitions) {
  const Scenario s = parse_scenario_text(R"({
    "dim": 2,
    "projectors": {"P": {"span": [[[1, 0], [0, 0]]]}, "Q": {"complement": "P"}},
    "decompositions": {"D": ["P", "Q"]},
    "histories": {"h": {"events": ["P", "Q"]}},
    "families": {"F": {"slots": ["D", "D"]}},
    "rho": [[[0.75, 0], [0, 0]], [[0, 0], [0.25, 0]]]
  })");
  EXPECT_EQ(s.histories.at("h").times(), (std::vector<Time>{0, 1}));
  EXPECT_NEAR(probability(s.histories.at("h"), s.families.at("F"), s.density(), s.tol), 0.0,
              1e-14);
  const History pp({s.projectors.at("P"), s.projectors.at("P")}, {0, 1});
  EXPECT_NEAR(probability(pp, s.families.at("F"), s.density(), s.tol), 0.75, 1e-14);
}

TEST(Scenario, CertificateFragmentParses) {
  const Scenario s = three_box_fixture();
  const ContraryInferenceCertificate c =
      kent_triple_check(s.projectors.at("E0"), s.projectors.at("E1"), s.projectors.at("F1"),
                        s.projectors.at("E2"), s.density(), s.tol);
  const Scenario back = parse_scenario(certificate_fragment(c));
  EXPECT_EQ(back.dim, 3);
  EXPECT_TRUE(equivalent(back.families.at("C1"), c.family_c1, 1e-10));
  EXPECT_TRUE(equivalent(back.families.at("C2"), c.family_c2, 1e-10));
  EXPECT_NEAR(probability(back.histories.at("h0"), back.families.at("C1"), back.density(),
                          back.tol),
              1.0 / 27.0, 1e-12);
}

TEST(Binary, ExitCodes) {
  const auto status = [](const std::string& args) {
    const std::string cmd =
        std::string(COHIST_BINARY) + " --scenario " + kFixture + " " + args + " >/dev/null 2>&1";
    const int raw = std::system(cmd.c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  };
  EXPECT_EQ(status("check-consistency C1"), 0);
  EXPECT_EQ(status("check-consistency joint"), 1);
  EXPECT_EQ(status("check-consistency missing"), 2);
}

}  // namespace
}  // namespace cohist
