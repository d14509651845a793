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

// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include "cohist/inference.hpp"
#include "cohist/kernels.hpp"
#include "cohist/rng.hpp"

namespace {

using cohist::Exec;

std::vector<cohist::Matrix> random_chains(int dim, std::size_t count) {
  cohist::Rng rng(7);
  std::vector<cohist::Matrix> chains;
  for (std::size_t i = 0; i < count; ++i) {
    cohist::Matrix m(dim, dim);
    for (int r = 0; r < dim; ++r) {
      for (int c = 0; c < dim; ++c) m(r, c) = rng.complex_normal();
    }
    chains.push_back(m);
  }
  return chains;
}

void BM_DecoherenceTable(benchmark::State& state, Exec exec) {
  const int dim = static_cast<int>(state.range(0));
  const auto chains = random_chains(dim, static_cast<std::size_t>(state.range(1)));
  const cohist::Matrix rho = cohist::Matrix::Identity(dim, dim) / dim;
  for (auto _ : state) {
    benchmark::DoNotOptimize(cohist::kernels::decoherence_table(chains, rho, exec));
  }
}
BENCHMARK_CAPTURE(BM_DecoherenceTable, serial, Exec::Serial)
    ->Args({4, 64})->Args({8, 256});
BENCHMARK_CAPTURE(BM_DecoherenceTable, omp, Exec::Parallel)
    ->Args({4, 64})->Args({8, 256});

void BM_SampleSystems(benchmark::State& state, Exec exec) {
  const std::vector<double> family_cdf{1.0, 2.0, 3.0};
  std::vector<std::vector<double>> elementary(3);
  for (auto& cdf : elementary) {
    for (int i = 1; i <= 8; ++i) cdf.push_back(i / 8.0);
  }
  cohist::kernels::SamplerInput in;
  in.family_cdf = family_cdf;
  in.elementary_cdf = elementary;
  in.ensemble_size = static_cast<std::size_t>(state.range(0));
  in.seed = 11;
  for (auto _ : state) {
    benchmark::DoNotOptimize(cohist::kernels::sample_systems(in, exec));
  }
}
BENCHMARK_CAPTURE(BM_SampleSystems, serial, Exec::Serial)->Arg(100000);
BENCHMARK_CAPTURE(BM_SampleSystems, omp, Exec::Parallel)->Arg(100000);

void BM_ContrarySearch(benchmark::State& state, Exec exec) {
  cohist::SearchOptions o;
  o.dim = static_cast<int>(state.range(0));
  o.trials = 200;
  o.seed = 3;
  o.exec = exec;
  for (auto _ : state) {
    benchmark::DoNotOptimize(cohist::find_contrary_inferences(o));
  }
}
BENCHMARK_CAPTURE(BM_ContrarySearch, serial, Exec::Serial)->Arg(3)->Arg(6);
BENCHMARK_CAPTURE(BM_ContrarySearch, omp, Exec::Parallel)->Arg(3)->Arg(6);

}  // namespace

BENCHMARK_MAIN();
