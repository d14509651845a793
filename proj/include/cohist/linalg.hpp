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

#include <Eigen/Dense>
#include <complex>
#include <span>

namespace cohist {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Structural tolerance used when a scenario does not set one.
inline constexpr double kDefaultTol = 1e-10;

/// Largest Hilbert-space dimension accepted at scenario load.
inline constexpr int kMaxDim = 64;

double max_abs_entry(const Matrix& m);
bool approx_equal(const Matrix& a, const Matrix& b, double tol);
bool is_hermitian(const Matrix& m, double tol);

/// Hermitian idempotent matrix. Instances are validated at construction and
/// immutable afterwards.
class Projector {
 public:
  /// Validates hermiticity, idempotency and integral trace within `tol`.
  static Projector from_matrix(Matrix m, double tol = kDefaultTol);
  static Projector identity(int dim);
  static Projector zero(int dim);
  /// Sum of pairwise orthogonal projectors (precondition, not checked), such
  /// as a subset of decomposition members. Rank is the sum of the ranks.
  static Projector from_orthogonal_sum(std::span<const Projector> terms,
                                       int dim);

  const Matrix& matrix() const noexcept { return m_; }
  int dim() const noexcept { return static_cast<int>(m_.rows()); }
  int rank() const noexcept { return rank_; }
  bool is_zero() const noexcept { return rank_ == 0; }

 private:
  friend Projector complement(const Projector& p);
  Projector(Matrix m, int rank) : m_(std::move(m)), rank_(rank) {}

  Matrix m_;
  int rank_ = 0;
};

/// Orthogonal projector onto span(vectors). Modified Gram-Schmidt with one
/// re-orthogonalization pass.
Projector projector_from_vectors(std::span<const Vector> vectors,
                                 double tol = kDefaultTol);

/// 1 - P.
Projector complement(const Projector& p);

/// max |PQ| <= tol.
bool orthogonal(const Projector& p, const Projector& q, double tol);
/// Subspace order: max |QP - P| <= tol.
bool leq(const Projector& p, const Projector& q, double tol);
/// max |PQ - QP| <= tol.
bool commutes(const Projector& p, const Projector& q, double tol);

/// PQ for commuting P, Q; throws NotAProjector otherwise.
Projector product(const Projector& p, const Projector& q, double tol);

/// Sum of pairwise orthogonal projectors; throws NotAProjector otherwise.
Projector sum(std::span<const Projector> terms, int dim, double tol);

/// Hermitian, positive semidefinite, unit-trace matrix.
class DensityMatrix {
 public:
  static DensityMatrix from_matrix(Matrix m, double tol = kDefaultTol);
  /// (1/N) * identity.
  static DensityMatrix maximally_mixed(int dim);

  const Matrix& matrix() const noexcept { return m_; }
  int dim() const noexcept { return static_cast<int>(m_.rows()); }

 private:
  explicit DensityMatrix(Matrix m) : m_(std::move(m)) {}
  Matrix m_;
};

}  // namespace cohist
