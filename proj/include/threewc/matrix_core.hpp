#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>

namespace threewc::la {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Relative threshold separating numerical zero from signal in singular
/// values: sigma_i counts as nonzero when sigma_i > rel_rank_eps * sigma_max.
struct Tolerance {
  double rel_rank_eps = 1e-9;
};

namespace detail {

inline Eigen::JacobiSVD<Matrix> full_svd(const Matrix& a) {
  return Eigen::JacobiSVD<Matrix>(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
}

inline int count_above(const Eigen::VectorXd& sv, double eps) {
  if (sv.size() == 0) return 0;
  const double cut = eps * sv(0);  // singular values are sorted descending
  int r = 0;
  while (r < sv.size() && sv(r) > cut && sv(r) > 0.0) ++r;
  return r;
}

}  // namespace detail

inline int rank(const Matrix& a, Tolerance tol = {}) {
  if (a.rows() == 0 || a.cols() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(a);
  return detail::count_above(svd.singularValues(), tol.rel_rank_eps);
}

/// Orthonormal basis (as columns) of the right null space of a: the columns
/// n satisfy a*n = 0 and n^H n = I. A matrix with no rows constrains
/// nothing, so the null space is the full identity.
inline Matrix null_space(const Matrix& a, Tolerance tol = {}) {
  if (a.cols() == 0) return Matrix(0, 0);
  if (a.rows() == 0) return Matrix::Identity(a.cols(), a.cols());
  auto svd = detail::full_svd(a);
  const int r = detail::count_above(svd.singularValues(), tol.rel_rank_eps);
  return svd.matrixV().rightCols(a.cols() - r);
}

/// Orthonormal basis of the column span; rank-revealing, so dependent
/// columns collapse.
inline Matrix orthonormal_basis(const Matrix& a, Tolerance tol = {}) {
  if (a.rows() == 0 || a.cols() == 0) return Matrix(a.rows(), 0);
  auto svd = detail::full_svd(a);
  const int r = detail::count_above(svd.singularValues(), tol.rel_rank_eps);
  return svd.matrixU().leftCols(r);
}

/// Moore-Penrose pseudoinverse via SVD with the same rank threshold.
inline Matrix pseudo_inverse(const Matrix& a, Tolerance tol = {}) {
  if (a.rows() == 0 || a.cols() == 0) return Matrix(a.cols(), a.rows());
  auto svd = detail::full_svd(a);
  const auto& sv = svd.singularValues();
  const int r = detail::count_above(sv, tol.rel_rank_eps);
  Matrix sigma_inv = Matrix::Zero(a.cols(), a.rows());
  for (int i = 0; i < r; ++i) sigma_inv(i, i) = 1.0 / sv(i);
  return svd.matrixV() * sigma_inv * svd.matrixU().adjoint();
}

/// Dimension of span(a) intersect span(b) for subspaces of the same ambient
/// space, by the rank identity dim = rank(a) + rank(b) - rank([a b]).
inline int intersection_dim(const Matrix& a, const Matrix& b, Tolerance tol = {}) {
  if (a.rows() != b.rows())
    throw std::invalid_argument("subspaces live in different ambient spaces");
  Matrix joint(a.rows(), a.cols() + b.cols());
  joint << a, b;
  return rank(a, tol) + rank(b, tol) - rank(joint, tol);
}

/// Orthonormal basis of span(a) intersect span(b). Vectors in the
/// intersection are a*x = -b*y for (x; y) in the null space of [a b].
inline Matrix subspace_intersection(const Matrix& a, const Matrix& b, Tolerance tol = {}) {
  if (a.rows() != b.rows())
    throw std::invalid_argument("subspaces live in different ambient spaces");
  if (a.cols() == 0 || b.cols() == 0) return Matrix(a.rows(), 0);
  Matrix joint(a.rows(), a.cols() + b.cols());
  joint << a, b;
  Matrix n = null_space(joint, tol);
  if (n.cols() == 0) return Matrix(a.rows(), 0);
  Matrix inside = a * n.topRows(a.cols());
  return orthonormal_basis(inside, tol);
}

/// Orthogonal projector onto span(a).
inline Matrix projector(const Matrix& a, Tolerance tol = {}) {
  Matrix q = orthonormal_basis(a, tol);
  return q * q.adjoint();
}

inline double max_abs(const Matrix& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

}  // namespace threewc::la
