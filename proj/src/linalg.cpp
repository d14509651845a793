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

#include "cohist/linalg.hpp"

#include <cmath>
#include <vector>

#include "cohist/error.hpp"

namespace cohist {

namespace {

void require_square(const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw InvalidArgument("matrix must be square and non-empty");
  }
}

void require_same_dim(const Projector& p, const Projector& q) {
  if (p.dim() != q.dim()) throw DimensionMismatch(p.dim(), q.dim());
}

}  // namespace

double max_abs_entry(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

bool approx_equal(const Matrix& a, const Matrix& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return max_abs_entry(a - b) <= tol;
}

bool is_hermitian(const Matrix& m, double tol) {
  return m.rows() == m.cols() && max_abs_entry(m - m.adjoint()) <= tol;
}

Projector Projector::from_matrix(Matrix m, double tol) {
  require_square(m);
  if (!m.allFinite()) throw NotAProjector("non-finite entry", INFINITY);
  const double herm = max_abs_entry(m - m.adjoint());
  if (herm > tol) throw NotAProjector("hermiticity", herm);
  const double idem = max_abs_entry(m * m - m);
  if (idem > tol) throw NotAProjector("idempotency", idem);
  const Complex tr = m.trace();
  if (std::abs(tr.imag()) > tol) throw NotAProjector("trace", tr.imag());
  const int rank = static_cast<int>(std::lround(tr.real()));
  return Projector(std::move(m), rank);
}

Projector Projector::identity(int dim) {
  if (dim <= 0) throw InvalidArgument("dimension must be positive");
  return Projector(Matrix::Identity(dim, dim), dim);
}

Projector Projector::zero(int dim) {
  if (dim <= 0) throw InvalidArgument("dimension must be positive");
  return Projector(Matrix::Zero(dim, dim), 0);
}

Projector Projector::from_orthogonal_sum(std::span<const Projector> terms,
                                         int dim) {
  if (dim <= 0) throw InvalidArgument("dimension must be positive");
  Matrix m = Matrix::Zero(dim, dim);
  int rank = 0;
  for (const Projector& t : terms) {
    if (t.dim() != dim) throw DimensionMismatch(dim, t.dim());
    m += t.matrix();
    rank += t.rank();
  }
  return Projector(std::move(m), rank);
}

Projector projector_from_vectors(std::span<const Vector> vectors, double tol) {
  if (vectors.empty()) throw InvalidArgument("no vectors given");
  const auto dim = vectors.front().size();
  if (dim == 0) throw InvalidArgument("empty vector");
  std::vector<Vector> basis;
  basis.reserve(vectors.size());
  for (std::size_t k = 0; k < vectors.size(); ++k) {
    const Vector& v = vectors[k];
    if (v.size() != dim) {
      throw DimensionMismatch(static_cast<int>(dim), static_cast<int>(v.size()));
    }
    const double norm0 = v.norm();
    Vector w = v;
    for (int pass = 0; pass < 2; ++pass) {
      for (const Vector& q : basis) w -= q * q.dot(w);
    }
    const double norm = w.norm();
    if (!(norm > tol * std::max(1.0, norm0))) throw DependentVectors(k);
    basis.push_back(w / norm);
  }
  Matrix m = Matrix::Zero(dim, dim);
  for (const Vector& q : basis) m += q * q.adjoint();
  return Projector::from_matrix(std::move(m), tol);
}

Projector complement(const Projector& p) {
  const int n = p.dim();
  // Residuals of 1 - P equal those of P, so no re-validation.
  return Projector(Matrix::Identity(n, n) - p.matrix(), n - p.rank());
}

bool orthogonal(const Projector& p, const Projector& q, double tol) {
  require_same_dim(p, q);
  return max_abs_entry(p.matrix() * q.matrix()) <= tol;
}

bool leq(const Projector& p, const Projector& q, double tol) {
  require_same_dim(p, q);
  return max_abs_entry(q.matrix() * p.matrix() - p.matrix()) <= tol;
}

bool commutes(const Projector& p, const Projector& q, double tol) {
  require_same_dim(p, q);
  const Matrix pq = p.matrix() * q.matrix();
  return max_abs_entry(pq - q.matrix() * p.matrix()) <= tol;
}

Projector product(const Projector& p, const Projector& q, double tol) {
  require_same_dim(p, q);
  Matrix pq = p.matrix() * q.matrix();
  // Symmetrize away rounding; a genuinely non-commuting pair still fails.
  const double asym = max_abs_entry(pq - pq.adjoint());
  if (asym > tol) throw NotAProjector("product of non-commuting pair", asym);
  Matrix sym = (pq + pq.adjoint()) * 0.5;
  return Projector::from_matrix(std::move(sym), tol);
}

Projector sum(std::span<const Projector> terms, int dim, double tol) {
  Matrix m = Matrix::Zero(dim, dim);
  for (const Projector& t : terms) {
    if (t.dim() != dim) throw DimensionMismatch(dim, t.dim());
    m += t.matrix();
  }
  return Projector::from_matrix(std::move(m), tol);
}

DensityMatrix DensityMatrix::from_matrix(Matrix m, double tol) {
  require_square(m);
  if (!is_hermitian(m, tol)) {
    throw InvalidArgument("density matrix is not Hermitian");
  }
  const Complex tr = m.trace();
  if (std::abs(tr - Complex(1.0, 0.0)) > tol) {
    throw InvalidArgument("density matrix does not have unit trace");
  }
  Matrix herm = (m + m.adjoint()) * 0.5;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(herm, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < -tol) {
    throw InvalidArgument("density matrix is not positive semidefinite");
  }
  return DensityMatrix(std::move(herm));
}

DensityMatrix DensityMatrix::maximally_mixed(int dim) {
  if (dim <= 0) throw InvalidArgument("dimension must be positive");
  return DensityMatrix(Matrix::Identity(dim, dim) / static_cast<double>(dim));
}

}  // namespace cohist
