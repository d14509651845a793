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

#include <algorithm>

#include "detail.hpp"

namespace cohist::kernels {

std::size_t draw_from_cdf(std::span<const double> cdf, double u) {
  const double target = u * cdf.back();
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), target);
  auto idx = static_cast<std::size_t>(it - cdf.begin());
  if (idx < cdf.size()) return idx;
  // u * total rounded up to total: take the last entry with positive mass.
  idx = cdf.size() - 1;
  while (idx > 0 && cdf[idx] == cdf[idx - 1]) --idx;
  return idx;
}

namespace serial {

Matrix decoherence_table(std::span<const Matrix> chains, const Matrix& rho) {
  const auto m = static_cast<Eigen::Index>(chains.size());
  const std::vector<Matrix> left = detail::left_products(chains, rho);
  Matrix table(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      table(i, j) = detail::trace_with_adjoint(left[i], chains[j]);
    }
  }
  return table;
}

std::vector<SystemDraw> sample_systems(const SamplerInput& in) {
  std::vector<SystemDraw> out(in.ensemble_size);
  const std::size_t shards = detail::shard_count(in.ensemble_size);
  for (std::size_t s = 0; s < shards; ++s) detail::sample_shard(in, s, out);
  return out;
}

void for_each_index(std::size_t n,
                    const std::function<void(std::size_t)>& body) {
  for (std::size_t i = 0; i < n; ++i) body(i);
}

}  // namespace serial
}  // namespace cohist::kernels
