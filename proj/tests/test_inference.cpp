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

#include "cohist/error.hpp"
#include "cohist/inference.hpp"
#include "test_util.hpp"

namespace cohist {
namespace {

// Independent re-check of the five contrary-inference conditions.
void oracle_verify(const ContraryInferenceCertificate& c, double tol) {
  const int n = c.e0.dim();
  const Matrix rho = test::mixed(n);
  const Matrix id = Matrix::Identity(n, n);
  EXPECT_LE(test::oracle_max_off_diagonal(c.family_c1, rho), tol);
  EXPECT_LE(test::oracle_max_off_diagonal(c.family_c2, rho), tol);
  const Matrix c0 = test::oracle_chain({c.e0.matrix(), id, c.e2.matrix()});
  const Matrix c1 = test::oracle_chain({c.e0.matrix(), c.e1.matrix(), c.e2.matrix()});
  const Matrix c2 = test::oracle_chain({c.e0.matrix(), c.f1.matrix(), c.e2.matrix()});
  const double p0 = test::oracle_d(c0, c0, rho).real();
  EXPECT_GT(p0, tol);
  EXPECT_NEAR(p0, c.p_joint, 1e-12);
  EXPECT_NEAR(test::oracle_d(c1, c1, rho).real() / p0, 1.0, tol);
  EXPECT_NEAR(test::oracle_d(c2, c2, rho).real() / p0, 1.0, tol);
  EXPECT_LE((c.e1.matrix() * c.f1.matrix()).cwiseAbs().maxCoeff(), tol);
  // Both families contain their generator and h0.
  EXPECT_TRUE(in_family(c.h1(), c.family_c1, tol));
  EXPECT_TRUE(in_family(c.h2(), c.family_c2, tol));
  EXPECT_TRUE(in_family(c.h0(), c.family_c1, tol));
  EXPECT_TRUE(in_family(c.h0(), c.family_c2, tol));
}

struct ThreeBoxInference : ::testing::Test {
  Scenario s = three_box_fixture();
  DensityMatrix rho = s.density();
  const Projector& E0 = s.projectors.at("E0");
  const Projector& E1 = s.projectors.at("E1");
  const Projector& F1 = s.projectors.at("F1");
  const Projector& E2 = s.projectors.at("E2");
};

TEST_F(ThreeBoxInference, TripleCheckSucceeds) {
  const ContraryInferenceCertificate c = kent_triple_check(E0, E1, F1, E2, rho, kDefaultTol);
  EXPECT_NEAR(c.p_joint, 1.0 / 27.0, 1e-12);
  EXPECT_NEAR(c.cond_c1, 1.0, 1e-12);
  EXPECT_NEAR(c.cond_c2, 1.0, 1e-12);
  EXPECT_LE(c.decoherence_c1, kDefaultTol);
  EXPECT_LE(c.decoherence_c2, kDefaultTol);
  oracle_verify(c, kDefaultTol);
  EXPECT_TRUE(equivalent(c.family_c1, s.families.at("C1"), kDefaultTol));
}

TEST_F(ThreeBoxInference, TripleCheckFailures) {
  EXPECT_THROW(kent_triple_check(E0, E1, E1, E2, rho, kDefaultTol), NotOrthogonal);
  // Final state orthogonal to the initial one: no joint probability
  // or no consistency, either way not a certificate.
  const Vector w = test::unit({1, -1, 0});
  const Projector bad = projector_from_vectors(std::span(&w, 1));
  const TripleOutcome out = evaluate_triple(E0, E1, F1, bad, rho, kDefaultTol);
  EXPECT_FALSE(out.certificate.has_value());
  ASSERT_TRUE(out.failed.has_value());
  EXPECT_THROW(kent_triple_check(E0, E1, F1, bad, rho, kDefaultTol), ConditionFailed);
  // Swapping the roles of E1 and a non-certain event breaks a conditional.
  const Projector c = complement(Projector::from_orthogonal_sum(std::vector{E1, F1}, 3));
  const TripleOutcome swapped = evaluate_triple(E0, E1, c, E2, rho, kDefaultTol);
  EXPECT_FALSE(swapped.certificate.has_value());
}

TEST(ConditionNames, Distinct) {
  EXPECT_EQ(to_string(Condition::JointProbability), "p_joint");
  EXPECT_NE(to_string(Condition::ConditionalC1), to_string(Condition::ConditionalC2));
}

TEST(Search, ConstrainedCertificatesReverify) {
  SearchOptions o;
  o.dim = 3;
  o.trials = 10000;
  o.seed = 11;
  const SearchResult r = find_contrary_inferences(o);
  EXPECT_EQ(r.trials_run, 10000u);
  EXPECT_GT(r.certificates.size(), 9000u);
  ASSERT_EQ(r.certificates.size(), r.trial_indices.size());
  for (std::size_t i = 0; i < r.certificates.size(); ++i) {
    if (i > 0) {
      EXPECT_LT(r.trial_indices[i - 1], r.trial_indices[i]);
    }
    if (i % 20 == 0) oracle_verify(r.certificates[i], o.tol);
  }
}

TEST(Search, HigherDimensionsAndRanks) {
  for (int dim : {4, 6, 8}) {
    SearchOptions o;
    o.dim = dim;
    o.trials = 30;
    o.seed = static_cast<std::uint64_t>(dim);
    o.allow_higher_rank = true;
    const SearchResult r = find_contrary_inferences(o);
    EXPECT_FALSE(r.certificates.empty()) << dim;
    for (const auto& c : r.certificates) oracle_verify(c, o.tol);
  }
}

TEST(Search, HaarSamplingRarelySucceeds) {
  SearchOptions o;
  o.dim = 3;
  o.trials = 300;
  o.seed = 5;
  o.strategy = SearchStrategy::Haar;
  const SearchResult r = find_contrary_inferences(o);
  for (const auto& c : r.certificates) oracle_verify(c, o.tol);
  EXPECT_LT(r.certificates.size(), 3u);
}

TEST(Search, DimensionRange) {
  for (int dim : {2, 9}) {
    SearchOptions o;
    o.dim = dim;
    EXPECT_THROW(find_contrary_inferences(o), InvalidArgument);
  }
}

TEST_F(ThreeBoxInference, PlantedCertificateRecovered) {
  SearchOptions o;
  o.dim = 3;
  o.trials = 0;
  o.planted.push_back({E0, E1, F1, E2});
  const SearchResult r = find_contrary_inferences(o);
  ASSERT_EQ(r.certificates.size(), 1u);
  EXPECT_EQ(r.trial_indices[0], 0u);
  EXPECT_NEAR(r.certificates[0].p_joint, 1.0 / 27.0, 1e-12);

  o.planted.push_back({E0, E1, E1, E2});  // skipped, not orthogonal
  o.planted.push_back({E0, E1, F1, E2});
  EXPECT_EQ(find_contrary_inferences(o).trial_indices, (std::vector<std::size_t>{0, 2}));

  SearchOptions wrong = o;
  wrong.dim = 4;
  EXPECT_THROW(find_contrary_inferences(wrong), DimensionMismatch);
}

TEST(Search, DeterministicAcrossExecutors) {
  SearchOptions o;
  o.dim = 4;
  o.trials = 100;
  o.seed = 99;
  o.exec = Exec::Serial;
  const SearchResult a = find_contrary_inferences(o);
  o.exec = Exec::Parallel;
  const SearchResult b = find_contrary_inferences(o);
  EXPECT_EQ(a.trial_indices, b.trial_indices);
  ASSERT_EQ(a.certificates.size(), b.certificates.size());
  for (std::size_t i = 0; i < a.certificates.size(); ++i) {
    EXPECT_EQ(a.certificates[i].p_joint, b.certificates[i].p_joint);
    EXPECT_TRUE(approx_equal(a.certificates[i].e2.matrix(), b.certificates[i].e2.matrix(), 0));
  }
  EXPECT_EQ(find_contrary_inferences(4, 100, 99).size(), a.certificates.size());
}

TEST_F(ThreeBoxInference, HistoryOrder) {
  const History& h0 = s.histories.at("h0");
  const History& h1 = s.histories.at("h1");
  const History& top = s.histories.at("top");
  EXPECT_TRUE(history_leq(h1, h0, kDefaultTol));
  EXPECT_FALSE(history_leq(h0, h1, kDefaultTol));
  EXPECT_TRUE(history_leq(h1, top, kDefaultTol));
  EXPECT_TRUE(history_leq(h1, h1, kDefaultTol));
  EXPECT_FALSE(history_leq(h1, s.histories.at("h2"), kDefaultTol));
}

TEST_F(ThreeBoxInference, OrderedConsistencyViolation) {
  const std::vector<Family> catalog{s.families.at("C1"), s.families.at("C2")};
  const History& h1 = s.histories.at("h1");
  const OrderedConsistencyVerdict v = is_ordered_consistent(h1, catalog, rho, kDefaultTol);
  EXPECT_FALSE(v.ordered_consistent);
  ASSERT_TRUE(v.violating_pair.has_value());
  const OrderedViolation& x = *v.violating_pair;
  EXPECT_EQ(v.catalog_size, 2u);
  EXPECT_EQ(x.family_index, 1u);
  EXPECT_TRUE(history_leq(h1, x.dominator, kDefaultTol));
  EXPECT_NEAR(x.weight_history, test::oracle_weight(h1, test::mixed(3)), 1e-14);
  EXPECT_NEAR(x.weight_dominator, test::oracle_weight(x.dominator, test::mixed(3)), 1e-14);
  EXPECT_GT(x.weight_history, x.weight_dominator + kDefaultTol);

  const OrderedConsistencyVerdict top =
      is_ordered_consistent(s.histories.at("top"), catalog, rho, kDefaultTol);
  EXPECT_TRUE(top.ordered_consistent);
  EXPECT_GT(top.comparisons, 0u);
}

TEST_F(ThreeBoxInference, OrderedConsistencyErrors) {
  const std::vector<Family> bad{s.families.at("joint")};
  EXPECT_THROW(is_ordered_consistent(s.histories.at("top"), bad, rho, kDefaultTol),
               InconsistentFamily);
  const std::vector<Family> only_c1{s.families.at("C1")};
  EXPECT_THROW(is_ordered_consistent(s.histories.at("h2"), only_c1, rho, kDefaultTol),
               HistoryNotInAnyConsistentFamily);
  const std::vector<Family> none;
  EXPECT_THROW(is_ordered_consistent(s.histories.at("h1"), none, rho, kDefaultTol),
               HistoryNotInAnyConsistentFamily);
}

TEST_F(ThreeBoxInference, ContraryWitness) {
  const auto w = find_contrary_witness(s.families.at("C1"), s.families.at("C2"),
                                       s.histories.at("h0"), rho, kDefaultTol);
  ASSERT_TRUE(w.has_value());
  EXPECT_EQ(w->e.times(), w->f.times());
  EXPECT_TRUE(orthogonal(w->e.event(0), w->f.event(0), kDefaultTol));
  EXPECT_FALSE(find_contrary_witness(s.families.at("C1"), s.families.at("C1"),
                                     s.histories.at("h0"), rho, kDefaultTol)
                   .has_value());
  EXPECT_FALSE(find_contrary_witness(s.families.at("C1"), s.families.at("joint"),
                                     s.histories.at("h0"), rho, kDefaultTol)
                   .has_value());
}

TEST_F(ThreeBoxInference, ZeroEventsFailJointProbability) {
  const Projector zero = Projector::zero(3);
  const TripleOutcome out = evaluate_triple(E0, zero, F1, zero, rho, kDefaultTol);
  EXPECT_FALSE(out.certificate.has_value());
  EXPECT_EQ(out.failed, std::optional<Condition>(Condition::JointProbability));
  try {
    (void)kent_triple_check(E0, zero, F1, zero, rho, kDefaultTol);
    FAIL() << "zero events accepted";
  } catch (const ConditionFailed& e) {
    EXPECT_EQ(e.which, Condition::JointProbability);
    EXPECT_FALSE(e.marginal);
  }
}

TEST(TripleCheck, ComplementaryMiddleEventsUsuallyFail) {
  Rng rng(21);
  int failures = 0;
  for (int t = 0; t < 50; ++t) {
    std::vector<Projector> p;
    for (int k = 0; k < 3; ++k) {
      const Vector v = rng.haar_vector(3);
      p.push_back(projector_from_vectors(std::span(&v, 1)));
    }
    const TripleOutcome out = evaluate_triple(p[0], p[1], complement(p[1]), p[2],
                                              DensityMatrix::maximally_mixed(3), kDefaultTol);
    failures += !out.certificate.has_value();
  }
  EXPECT_EQ(failures, 50);
}

TEST(Search, ZeroTrialsGiveNothing) {
  EXPECT_TRUE(find_contrary_inferences(3, 0, 1).empty());
}

TEST_F(ThreeBoxInference, ElementaryHistoriesLieBelowTheirCell) {
  const Family& c1 = s.families.at("C1");
  for (const CoarseIndex& idx : enumerate_coarse_indices(c1)) {
    const History h = coarse_history(c1, idx);
    for (const History& e : coarse_history_cell(h, c1, kDefaultTol)) {
      EXPECT_TRUE(history_leq(e, h, kDefaultTol));
    }
  }
}

TEST_F(ThreeBoxInference, SingleFamilyCatalogIsOrderedConsistent) {
  for (const char* name : {"C1", "C2", "Ch0"}) {
    const std::vector<Family> catalog{s.families.at(name)};
    for (const CoarseIndex& idx : enumerate_coarse_indices(catalog[0])) {
      const History h = coarse_history(catalog[0], idx);
      EXPECT_TRUE(is_ordered_consistent(h, catalog, rho, kDefaultTol).ordered_consistent)
          << name << " " << h.describe();
    }
  }
}

}  // namespace
}  // namespace cohist
