#pragma once

#include <Eigen/Dense>

#include "crimenet/errors.hpp"
#include "crimenet/types.hpp"

// Dense kernels shared by the similarity and regression code. All functions
// accept arbitrary Eigen expressions and return plain matrices.

namespace crimenet {

// L = D - W over the full node set. Rows of W must be the symmetric weighted
// adjacency; degrees are taken as row sums, so L's row sums cancel exactly.
template <typename Derived>
Matrix laplacian_from_adjacency(const Eigen::MatrixBase<Derived>& weights) {
  Matrix w = weights;
  Matrix lap = -w;
  lap.diagonal() += w.rowwise().sum();
  return lap;
}

// Row-stochastic transition matrix p_ij = w_ij / sum_k w_ik. Rows with zero
// degree (isolated nodes) stay all-zero.
template <typename Derived>
Matrix row_stochastic(const Eigen::MatrixBase<Derived>& weights) {
  Matrix p = weights;
  Vector degree = p.rowwise().sum();
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    if (degree[i] > 0.0) p.row(i) /= degree[i];
  }
  return p;
}

// Moore-Penrose pseudoinverse of a symmetric matrix via its eigendecomposition.
// Eigenvalues with |lambda| <= rank_tol * max|lambda| are treated as exact
// zeros. Throws NotSymmetric when the input is not symmetric within 1e-12
// relative to its largest entry.
template <typename Derived>
Matrix pseudo_inverse(const Eigen::MatrixBase<Derived>& matrix, double rank_tol = 1e-9) {
  Matrix s = matrix;
  if (s.rows() != s.cols()) throw NotSymmetric("matrix is not square");
  const double scale = std::max(1.0, s.cwiseAbs().maxCoeff());
  const double asym = (s - s.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * scale) throw NotSymmetric("asymmetry " + std::to_string(asym));

  // Symmetrize so the solver sees an exactly self-adjoint operand.
  Matrix sym = 0.5 * (s + s.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym);
  if (eig.info() != Eigen::Success) throw InternalError("eigendecomposition failed");

  const Vector& lambda = eig.eigenvalues();
  const double lambda_max = lambda.cwiseAbs().maxCoeff();
  const double cutoff = rank_tol * lambda_max;

  Vector inv = Vector::Zero(lambda.size());
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    if (std::abs(lambda[i]) > cutoff) inv[i] = 1.0 / lambda[i];
  }
  return eig.eigenvectors() * inv.asDiagonal() * eig.eigenvectors().transpose();
}

// Minimum-norm least-squares solution of X a = y through the pseudoinverse of
// the normal-equations matrix: a = (X'X)^+ X'y. For rank-deficient X this is
// the same minimum-norm minimizer as pinv(X) y.
template <typename DerivedX, typename DerivedY>
Vector minimum_norm_least_squares(const Eigen::MatrixBase<DerivedX>& x,
                                  const Eigen::MatrixBase<DerivedY>& y,
                                  double rank_tol = 1e-12) {
  if (x.rows() != y.rows()) throw DimensionMismatch("rows of X and y differ");
  Matrix normal = x.transpose() * x;
  return pseudo_inverse(normal, rank_tol) * (x.transpose() * y);
}

// Commute time between nodes i and j from the Laplacian pseudoinverse:
// vol * (L+_ii + L+_jj - 2 L+_ij), vol being twice the total edge weight.
inline double commute_time(const Matrix& lap_pinv, double volume, int i, int j) {
  return volume * (lap_pinv(i, i) + lap_pinv(j, j) - 2.0 * lap_pinv(i, j));
}

}  // namespace crimenet
