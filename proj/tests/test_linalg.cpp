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
#include "cohist/linalg.hpp"
#include "test_util.hpp"

namespace cohist {
namespace {

using test::unit;

Matrix diag(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v.asDiagonal();
}

Projector diag_projector(std::initializer_list<double> xs) {
  return Projector::from_matrix(diag(xs));
}

TEST(ProjectorFromVectors, BasisVector) {
  const Vector e1 = unit({1, 0});
  const Projector p = projector_from_vectors(std::span(&e1, 1));
  EXPECT_TRUE(approx_equal(p.matrix(), diag({1, 0}), 1e-12));
  EXPECT_EQ(p.rank(), 1);
}

TEST(ProjectorFromVectors, FullBasisIsIdentity) {
  const std::vector<Vector> vs{unit({1, 0, 0}), unit({0, 1, 0}), unit({0, 0, 1})};
  const Projector p = projector_from_vectors(vs);
  EXPECT_TRUE(approx_equal(p.matrix(), Matrix::Identity(3, 3), 1e-12));
  EXPECT_EQ(p.rank(), 3);
}

TEST(ProjectorFromVectors, UniformVectorHasAllEntriesOneThird) {
  const Vector v = unit({1, 1, 1});
  const Projector p = projector_from_vectors(std::span(&v, 1));
  const Matrix expected = Matrix::Constant(3, 3, Complex(1.0 / 3.0, 0.0));
  EXPECT_TRUE(approx_equal(p.matrix(), expected, 1e-12));
}

TEST(ProjectorFromVectors, UnnormalizedInputSpansSameSubspace) {
  const std::vector<Vector> raw{test::unit({1, 1, 0}) * 5.0, test::unit({1, -1, 0}) * 0.1};
  const Projector p = projector_from_vectors(raw);
  EXPECT_TRUE(approx_equal(p.matrix(), diag({1, 1, 0}), 1e-12));
}

TEST(ProjectorFromVectors, Errors) {
  const std::vector<Vector> dependent{unit({1, 1}), unit({2, 2})};
  EXPECT_THROW(projector_from_vectors(dependent), DependentVectors);
  const std::vector<Vector> mixed_dims{unit({1, 0}), unit({0, 0, 1})};
  EXPECT_THROW(projector_from_vectors(mixed_dims), DimensionMismatch);
  EXPECT_THROW(projector_from_vectors({}), InvalidArgument);
}

TEST(FromMatrix, RejectsNonProjectors) {
  EXPECT_THROW(Projector::from_matrix(diag({0.5, 0})), NotAProjector);
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = 1.0;
  EXPECT_THROW(Projector::from_matrix(m), NotAProjector);
}

TEST(Complement, Examples) {
  EXPECT_TRUE(complement(Projector::identity(3)).is_zero());
  EXPECT_TRUE(approx_equal(complement(Projector::zero(3)).matrix(), Matrix::Identity(3, 3), 0));
  const Projector c = complement(diag_projector({1, 0, 0}));
  EXPECT_TRUE(approx_equal(c.matrix(), diag({0, 1, 1}), 0));
  EXPECT_EQ(c.rank(), 2);
}

TEST(Orthogonal, Examples) {
  EXPECT_TRUE(orthogonal(diag_projector({1, 0}), diag_projector({0, 1}), kDefaultTol));
  const Projector p = diag_projector({1, 0});
  EXPECT_FALSE(orthogonal(p, p, kDefaultTol));
  const Vector a = unit({1, 1, 0});
  const Vector b = unit({1, -1, 0});
  EXPECT_TRUE(orthogonal(projector_from_vectors(std::span(&a, 1)),
                         projector_from_vectors(std::span(&b, 1)), kDefaultTol));
  EXPECT_THROW(orthogonal(p, Projector::identity(3), kDefaultTol), DimensionMismatch);
}

TEST(Leq, Examples) {
  const Projector p = diag_projector({1, 0, 0});
  EXPECT_TRUE(leq(Projector::zero(3), p, kDefaultTol));
  EXPECT_TRUE(leq(p, Projector::identity(3), kDefaultTol));
  EXPECT_TRUE(leq(p, diag_projector({1, 1, 0}), kDefaultTol));
  EXPECT_FALSE(leq(p, diag_projector({0, 1, 1}), kDefaultTol));
}

TEST(Commutes, Examples) {
  const Projector p = diag_projector({1, 0});
  EXPECT_TRUE(commutes(p, Projector::identity(2), kDefaultTol));
  EXPECT_TRUE(commutes(p, diag_projector({0, 1}), kDefaultTol));
  // P = |0><0|, Q = |+><+|: PQ - QP has off-diagonal entries +-1/2.
  const Vector plus = unit({1, 1});
  const Projector q = projector_from_vectors(std::span(&plus, 1));
  EXPECT_FALSE(commutes(p, q, kDefaultTol));
  const Matrix comm = p.matrix() * q.matrix() - q.matrix() * p.matrix();
  EXPECT_NEAR(std::abs(comm(0, 1)), 0.5, 1e-12);
}

TEST(ProductAndSum, Behaviour) {
  const Projector a = diag_projector({1, 1, 0});
  const Projector b = diag_projector({0, 1, 1});
  EXPECT_TRUE(approx_equal(product(a, b, kDefaultTol).matrix(), diag({0, 1, 0}), 0));
  const Vector plus = unit({1, 1, 0});
  EXPECT_THROW(product(diag_projector({1, 0, 0}),
                       projector_from_vectors(std::span(&plus, 1)), kDefaultTol),
               NotAProjector);
  const std::vector<Projector> parts{diag_projector({1, 0, 0}), diag_projector({0, 0, 1})};
  const Projector s = sum(parts, 3, kDefaultTol);
  EXPECT_EQ(s.rank(), 2);
  const std::vector<Projector> overlapping{a, b};
  EXPECT_THROW(sum(overlapping, 3, kDefaultTol), NotAProjector);
}

TEST(DensityMatrix, Validation) {
  EXPECT_NO_THROW(DensityMatrix::from_matrix(diag({0.25, 0.75})));
  EXPECT_THROW(DensityMatrix::from_matrix(diag({0.5, 0.6})), InvalidArgument);
  EXPECT_THROW(DensityMatrix::from_matrix(diag({1.5, -0.5})), InvalidArgument);
  EXPECT_TRUE(approx_equal(DensityMatrix::maximally_mixed(4).matrix(), test::mixed(4), 0));
}

class RandomProjectors : public ::testing::TestWithParam<int> {};

TEST_P(RandomProjectors, Invariants) {
  Rng rng(100 + static_cast<std::uint64_t>(GetParam()));
  for (int trial = 0; trial < 25; ++trial) {
    const int dim = 2 + static_cast<int>(rng.index(7));
    const int rank = 1 + static_cast<int>(rng.index(static_cast<std::size_t>(dim)));
    std::vector<Vector> vs;
    for (int i = 0; i < rank; ++i) vs.push_back(rng.haar_vector(dim));
    const Projector p = projector_from_vectors(vs);
    const Matrix& m = p.matrix();
    EXPECT_LE(max_abs_entry(m - m.adjoint()), kDefaultTol);
    EXPECT_LE(max_abs_entry(m * m - m), kDefaultTol);
    EXPECT_EQ(p.rank(), rank);
    const Projector cc = complement(complement(p));
    EXPECT_LE(max_abs_entry(cc.matrix() - m), kDefaultTol);
    EXPECT_EQ(cc.rank(), rank);

    // orthogonal(P, Q) implies P <= 1 - Q.
    const Matrix u = test::random_unitary(rng, dim);
    const Projector a = test::column_projector(u, {0});
    const Projector b = test::column_projector(u, {dim - 1});
    ASSERT_TRUE(orthogonal(a, b, kDefaultTol));
    EXPECT_TRUE(leq(a, complement(b), kDefaultTol));

    // Cyclic trace.
    Matrix x(dim, dim), y(dim, dim), z(dim, dim);
    for (Matrix* w : {&x, &y, &z}) {
      for (int r = 0; r < dim; ++r) {
        for (int c = 0; c < dim; ++c) (*w)(r, c) = rng.complex_normal();
      }
    }
    EXPECT_LE(std::abs((x * y * z).trace() - (z * x * y).trace()), 1e-10);
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, RandomProjectors, ::testing::Range(0, 4));

}  // namespace
}  // namespace cohist
