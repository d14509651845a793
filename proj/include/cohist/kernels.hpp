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

#pragma once

// Data-parallel kernels. Every kernel has a serial reference in
// `kernels::serial` and an OpenMP version in `kernels::omp`; both evaluate
// each output element with the same arithmetic in the same order, so their
// results are bit-identical and the serial path serves as the test oracle
// for the parallel one.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "cohist/linalg.hpp"

namespace cohist {

enum class Exec { Serial, Parallel };

namespace kernels {

/// One draw of the support-model sampler.
struct SystemDraw {
  std::uint32_t family = 0;
  std::uint64_t elementary = 0;
};

/// Inputs of the ensemble sampler. `family_cdf` is the cumulative
/// membership-weight distribution; `elementary_cdf[f]` the cumulative
/// distribution over the elementary histories of family f.
struct SamplerInput {
  std::span<const double> family_cdf;
  std::span<const std::vector<double>> elementary_cdf;
  std::size_t ensemble_size = 0;
  std::uint64_t seed = 0;
};

/// Systems per shard; shard s draws from Rng::for_stream(seed, s).
inline constexpr std::size_t kShardSize = 4096;

/// Draw index from a cumulative distribution with uniform variate u.
std::size_t draw_from_cdf(std::span<const double> cdf, double u);

namespace serial {

/// Table D(i, j) = Tr(C_i rho C_j^dagger).
Matrix decoherence_table(std::span<const Matrix> chains, const Matrix& rho);

std::vector<SystemDraw> sample_systems(const SamplerInput& in);

/// body(i) for i in [0, n), in order.
void for_each_index(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace serial

namespace omp {

Matrix decoherence_table(std::span<const Matrix> chains, const Matrix& rho);

std::vector<SystemDraw> sample_systems(const SamplerInput& in);

/// body(i) for i in [0, n), distributed over OpenMP threads. body must only
/// write to state owned by index i.
void for_each_index(std::size_t n, const std::function<void(std::size_t)>& body);

int max_threads();

}  // namespace omp

inline Matrix decoherence_table(std::span<const Matrix> chains,
                                const Matrix& rho, Exec exec) {
  return exec == Exec::Serial ? serial::decoherence_table(chains, rho)
                              : omp::decoherence_table(chains, rho);
}

inline std::vector<SystemDraw> sample_systems(const SamplerInput& in,
                                              Exec exec) {
  return exec == Exec::Serial ? serial::sample_systems(in)
                              : omp::sample_systems(in);
}

inline void for_each_index(std::size_t n,
                           const std::function<void(std::size_t)>& body,
                           Exec exec) {
  if (exec == Exec::Serial) {
    serial::for_each_index(n, body);
  } else {
    omp::for_each_index(n, body);
  }
}

}  // namespace kernels
}  // namespace cohist
