#include "threewc/matrix_core.hpp"

#include <gtest/gtest.h>

#include <random>

#include "threewc/channel.hpp"

namespace la = threewc::la;
using la::Matrix;

namespace {

Matrix randm(int rows, int cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return threewc::complex_gaussian_matrix(rows, cols, rng);
}

}  // namespace

TEST(MatrixCore, RankOfKnownMatrices) {
  EXPECT_EQ(la::rank(Matrix::Identity(3, 3)), 3);
  EXPECT_EQ(la::rank(Matrix::Zero(4, 2)), 0);
  EXPECT_EQ(la::rank(Matrix(0, 3)), 0);

  // Outer product u v^H has rank exactly 1.
  Matrix u = randm(5, 1, 11);
  Matrix v = randm(4, 1, 12);
  EXPECT_EQ(la::rank(u * v.adjoint()), 1);

  // Sum of two generic rank-1 terms has rank 2; duplicating a column keeps it.
  Matrix a = randm(4, 2, 13);
  Matrix m(4, 3);
  m << a, a.col(0);
  EXPECT_EQ(la::rank(m), 2);

  // Generic rectangular draws have full rank.
  EXPECT_EQ(la::rank(randm(3, 5, 14)), 3);
  EXPECT_EQ(la::rank(randm(5, 3, 15)), 3);
}

TEST(MatrixCore, RankToleranceSeparatesNoise) {
  Matrix a = randm(4, 4, 21);
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::VectorXd sv = svd.singularValues();
  sv(3) = sv(0) * 1e-12;  // below the default relative threshold
  Matrix damped = svd.matrixU() * sv.asDiagonal() * svd.matrixV().adjoint();
  EXPECT_EQ(la::rank(damped), 3);
  EXPECT_EQ(la::rank(damped, {.rel_rank_eps = 1e-14}), 4);
}

TEST(MatrixCore, NullSpaceProperties) {
  const Matrix a = randm(2, 5, 31);  // wide: null space has dimension 3
  const Matrix n = la::null_space(a);
  ASSERT_EQ(n.rows(), 5);
  ASSERT_EQ(n.cols(), 3);
  EXPECT_LE(la::max_abs(a * n), 1e-8 * la::max_abs(a));
  EXPECT_LE(la::max_abs(n.adjoint() * n - Matrix::Identity(3, 3)), 1e-9);

  // Full-rank square matrices have empty null spaces.
  EXPECT_EQ(la::null_space(randm(4, 4, 32)).cols(), 0);

  // No rows means no constraints.
  const Matrix free = la::null_space(Matrix(0, 3));
  EXPECT_EQ(free.cols(), 3);
  EXPECT_LE(la::max_abs(free - Matrix::Identity(3, 3)), 1e-15);
}

TEST(MatrixCore, NullSpaceOfKnownMatrix) {
  // Rows pin the first two coordinates; the null space is exactly e3.
  Matrix a(2, 3);
  a << 1, 0, 0, 0, 1, 0;
  const Matrix n = la::null_space(a);
  ASSERT_EQ(n.cols(), 1);
  EXPECT_NEAR(std::abs(n(2, 0)), 1.0, 1e-12);
  EXPECT_NEAR(std::abs(n(0, 0)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(n(1, 0)), 0.0, 1e-12);
}

TEST(MatrixCore, PseudoInverseMatchesNormalEquationsOracle) {
  // Independent derivation for full column rank: pinv = (A^H A)^{-1} A^H.
  const Matrix a = randm(6, 3, 41);
  const Matrix oracle = (a.adjoint() * a).inverse() * a.adjoint();
  const Matrix p = la::pseudo_inverse(a);
  ASSERT_EQ(p.rows(), 3);
  ASSERT_EQ(p.cols(), 6);
  EXPECT_LE(la::max_abs(p - oracle), 1e-8 * la::max_abs(oracle));

  // Square invertible: pseudo inverse is the inverse.
  const Matrix b = randm(4, 4, 42);
  EXPECT_LE(la::max_abs(la::pseudo_inverse(b) - b.inverse()),
            1e-8 * la::max_abs(b.inverse()));
}

TEST(MatrixCore, PseudoInversePenroseIdentities) {
  // Rank-deficient case: build a 5x4 matrix of rank 2 and verify all four
  // Moore-Penrose identities.
  const Matrix a = randm(5, 2, 51) * randm(2, 4, 52);
  const Matrix p = la::pseudo_inverse(a);
  const double scale = la::max_abs(a);
  EXPECT_LE(la::max_abs(a * p * a - a), 1e-8 * scale);
  EXPECT_LE(la::max_abs(p * a * p - p), 1e-8 * la::max_abs(p));
  EXPECT_LE(la::max_abs((a * p).adjoint() - a * p), 1e-8);
  EXPECT_LE(la::max_abs((p * a).adjoint() - p * a), 1e-8);
}

TEST(MatrixCore, PreimageThroughPseudoInverse) {
  // For targets inside the range, pinv gives an exact preimage.
  const Matrix h = randm(3, 5, 61);
  const Matrix target = h * randm(5, 2, 62);  // in range by construction
  const Matrix x = la::pseudo_inverse(h) * target;
  EXPECT_LE(la::max_abs(h * x - target), 1e-8 * la::max_abs(target));
}

TEST(MatrixCore, OrthonormalBasisCollapsesDependentColumns) {
  const Matrix a = randm(5, 3, 71);
  Matrix doubled(5, 6);
  doubled << a, a * randm(3, 3, 72);
  const Matrix q = la::orthonormal_basis(doubled);
  ASSERT_EQ(q.cols(), 3);
  EXPECT_LE(la::max_abs(q.adjoint() * q - Matrix::Identity(3, 3)), 1e-9);
  // Same span: projectors agree.
  EXPECT_LE(la::max_abs(la::projector(a) - q * q.adjoint()), 1e-8);
}

TEST(MatrixCore, IntersectionOfPlantedSubspaces) {
  // Shared 2-dimensional core S plus independent extras on both sides.
  const Matrix s = randm(8, 2, 81);
  Matrix a(8, 4), b(8, 5);
  a << s, randm(8, 2, 82);
  b << s, randm(8, 3, 83);

  EXPECT_EQ(la::intersection_dim(a, b), 2);
  const Matrix g = la::subspace_intersection(a, b);
  ASSERT_EQ(g.cols(), 2);
  EXPECT_LE(la::max_abs(g.adjoint() * g - Matrix::Identity(2, 2)), 1e-9);
  // The computed basis spans exactly span(S): projector residuals vanish.
  EXPECT_LE(la::max_abs(la::projector(s) * g - g), 1e-8);
  EXPECT_LE(la::max_abs(g * g.adjoint() - la::projector(s)), 1e-8);
}

TEST(MatrixCore, IntersectionOfGenericSubspacesInLowDimension) {
  // Two generic 2-dim subspaces of C^3 intersect in dimension 1.
  const Matrix a = randm(3, 2, 91);
  const Matrix b = randm(3, 2, 92);
  EXPECT_EQ(la::intersection_dim(a, b), 1);
  const Matrix g = la::subspace_intersection(a, b);
  ASSERT_EQ(g.cols(), 1);
  // The intersection direction lies in both spans.
  EXPECT_LE(la::max_abs(la::projector(a) * g - g), 1e-8);
  EXPECT_LE(la::max_abs(la::projector(b) * g - g), 1e-8);
}

TEST(MatrixCore, DisjointSubspacesGiveEmptyIntersection) {
  const Matrix a = randm(6, 2, 101);
  const Matrix b = randm(6, 3, 102);
  EXPECT_EQ(la::intersection_dim(a, b), 0);
  EXPECT_EQ(la::subspace_intersection(a, b).cols(), 0);
  EXPECT_THROW(la::subspace_intersection(randm(3, 1, 103), randm(4, 1, 104)),
               std::invalid_argument);
}

TEST(MatrixCore, ProjectorIsIdempotentAndHermitian) {
  const Matrix p = la::projector(randm(5, 2, 111));
  EXPECT_LE(la::max_abs(p * p - p), 1e-9);
  EXPECT_LE(la::max_abs(p.adjoint() - p), 1e-9);
}
