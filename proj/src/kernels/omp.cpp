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

#include <omp.h>

#include <exception>
#include <mutex>

#include "detail.hpp"

namespace cohist::kernels::omp {

Matrix decoherence_table(std::span<const Matrix> chains, const Matrix& rho) {
  const auto m = static_cast<Eigen::Index>(chains.size());
  std::vector<Matrix> left(chains.size());
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < m; ++i) left[i] = chains[i] * rho;

  Matrix table(m, m);
#pragma omp parallel for schedule(dynamic, 4)
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      table(i, j) = detail::trace_with_adjoint(left[i], chains[j]);
    }
  }
  return table;
}

std::vector<SystemDraw> sample_systems(const SamplerInput& in) {
  std::vector<SystemDraw> out(in.ensemble_size);
  const auto shards = static_cast<std::int64_t>(
      detail::shard_count(in.ensemble_size));
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t s = 0; s < shards; ++s) {
    detail::sample_shard(in, static_cast<std::size_t>(s), out);
  }
  return out;
}

void for_each_index(std::size_t n,
                    const std::function<void(std::size_t)>& body) {
  std::exception_ptr first_error;
  std::mutex guard;
  const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard lock(guard);
      if (!first_error) first_error = std::current_exception();
    }
  }
  if (first_error) std::rethrow_exception(first_error);
}

int max_threads() { return omp_get_max_threads(); }

}  // namespace cohist::kernels::omp
