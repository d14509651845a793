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

#include <atomic>

#include "cohist/kernels.hpp"
#include "test_util.hpp"

namespace cohist {
namespace {

std::vector<Matrix> random_chains(Rng& rng, int dim, int count) {
  std::vector<Matrix> out;
  for (int i = 0; i < count; ++i) {
    Matrix m(dim, dim);
    for (int r = 0; r < dim; ++r) {
      for (int c = 0; c < dim; ++c) m(r, c) = rng.complex_normal();
    }
    out.push_back(m);
  }
  return out;
}

TEST(Kernels, DecoherenceTableMatchesOracleAndIsExecutorIndependent) {
  Rng rng(12);
  const auto chains = random_chains(rng, 5, 40);
  const Matrix rho = test::mixed(5);
  const Matrix a = kernels::serial::decoherence_table(chains, rho);
  const Matrix b = kernels::omp::decoherence_table(chains, rho);
  ASSERT_EQ(a.rows(), 40);
  EXPECT_TRUE(a == b);
  for (int i = 0; i < 40; i += 7) {
    for (int j = 0; j < 40; j += 5) {
      EXPECT_LE(std::abs(a(i, j) - test::oracle_d(chains[static_cast<std::size_t>(i)],
                                                  chains[static_cast<std::size_t>(j)], rho)),
                1e-10);
    }
  }
  EXPECT_TRUE(approx_equal(a, a.adjoint(), 1e-10));
}

TEST(Kernels, DrawFromCdf) {
  const std::vector<double> cdf{0.25, 0.25, 0.75, 1.0};
  EXPECT_EQ(kernels::draw_from_cdf(cdf, 0.0), 0u);
  EXPECT_EQ(kernels::draw_from_cdf(cdf, 0.3), 2u);
  EXPECT_EQ(kernels::draw_from_cdf(cdf, 0.9), 3u);
  // A zero-width bucket is never chosen.
  for (double u = 0.0; u < 1.0; u += 0.01) EXPECT_NE(kernels::draw_from_cdf(cdf, u), 1u);
  const std::vector<double> short_total{0.4, 0.8};
  EXPECT_EQ(kernels::draw_from_cdf(short_total, 0.99), 1u);
}

TEST(Kernels, SamplerIsDeterministicAcrossExecutors) {
  const std::vector<double> family_cdf{1.0, 3.0, 6.0};
  const std::vector<std::vector<double>> elementary{
      {0.5, 1.0}, {0.1, 0.2, 0.6, 1.0}, {1.0}};
  kernels::SamplerInput in;
  in.family_cdf = family_cdf;
  in.elementary_cdf = elementary;
  in.ensemble_size = 3 * kernels::kShardSize + 17;
  in.seed = 2026;
  const auto a = kernels::serial::sample_systems(in);
  const auto b = kernels::omp::sample_systems(in);
  ASSERT_EQ(a.size(), in.ensemble_size);
  ASSERT_EQ(b.size(), a.size());
  std::vector<std::size_t> per_family(3, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].family, b[i].family);
    EXPECT_EQ(a[i].elementary, b[i].elementary);
    ASSERT_LT(a[i].family, 3u);
    EXPECT_LT(a[i].elementary, elementary[a[i].family].size());
    ++per_family[a[i].family];
  }
  const double n = static_cast<double>(a.size());
  EXPECT_NEAR(per_family[0] / n, 1.0 / 6.0, 0.02);
  EXPECT_NEAR(per_family[2] / n, 0.5, 0.02);
}

TEST(Kernels, ForEachIndexVisitsEveryIndexOnce) {
  for (Exec exec : {Exec::Serial, Exec::Parallel}) {
    std::vector<std::atomic<int>> hits(1000);
    kernels::for_each_index(hits.size(), [&](std::size_t i) { ++hits[i]; }, exec);
    for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
    kernels::for_each_index(0, [&](std::size_t) { FAIL(); }, exec);
  }
  EXPECT_GE(kernels::omp::max_threads(), 1);
}

TEST(Kernels, WeakDecoherenceSameUnderBothExecutors) {
  Rng rng(9);
  for (int t = 0; t < 5; ++t) {
    const Family f = test::random_certificate_family(rng, 5);
    const DensityMatrix rho = DensityMatrix::maximally_mixed(5);
    const auto a = is_weakly_decoherent(f, rho, kDefaultTol, Exec::Serial);
    const auto b = is_weakly_decoherent(f, rho, kDefaultTol, Exec::Parallel);
    EXPECT_EQ(a.max_off_diagonal_re, b.max_off_diagonal_re);
    EXPECT_EQ(a.worst_pair, b.worst_pair);
  }
}

}  // namespace
}  // namespace cohist
