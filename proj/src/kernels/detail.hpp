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

// Per-element arithmetic shared by the serial and OpenMP kernels.

#include <cstddef>
#include <span>
#include <vector>

#include "cohist/kernels.hpp"
#include "cohist/rng.hpp"

namespace cohist::kernels::detail {

/// Tr(A B^dagger) summed row-major, the fixed order both kernels use.
inline Complex trace_with_adjoint(const Matrix& a, const Matrix& b) {
  Complex acc{0.0, 0.0};
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    for (Eigen::Index c = 0; c < a.cols(); ++c) {
      acc += a(r, c) * std::conj(b(r, c));
    }
  }
  return acc;
}

inline std::vector<Matrix> left_products(std::span<const Matrix> chains,
                                         const Matrix& rho) {
  std::vector<Matrix> out;
  out.reserve(chains.size());
  for (const Matrix& c : chains) out.push_back(c * rho);
  return out;
}

inline std::size_t shard_count(std::size_t n) {
  return (n + kShardSize - 1) / kShardSize;
}

inline void sample_shard(const SamplerInput& in, std::size_t shard,
                         std::span<SystemDraw> out) {
  Rng rng = Rng::for_stream(in.seed, shard);
  const std::size_t begin = shard * kShardSize;
  const std::size_t end = std::min(in.ensemble_size, begin + kShardSize);
  for (std::size_t i = begin; i < end; ++i) {
    const std::size_t f = draw_from_cdf(in.family_cdf, rng.uniform());
    const std::size_t e = draw_from_cdf(in.elementary_cdf[f], rng.uniform());
    out[i] = SystemDraw{static_cast<std::uint32_t>(f),
                        static_cast<std::uint64_t>(e)};
  }
}

}  // namespace cohist::kernels::detail
