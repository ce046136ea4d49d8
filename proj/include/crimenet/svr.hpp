#pragma once

#include <optional>

#include "crimenet/types.hpp"

// Epsilon-SVR with an RBF kernel, solved in the dual by sequential minimal
// optimization. The dual is handled in the standard 2N-variable form
// theta = (alpha, alpha*) with box [0, C] and the balance constraint
// sum(alpha) = sum(alpha*); pairs are chosen by maximal KKT violation and
// updated analytically. Iteration stops once the maximal violation drops
// under tol or the pair-update budget runs out.

namespace crimenet {

struct SvrParams {
  double C = 1.0;
  double epsilon = 0.1;
  std::optional<double> gamma;  // nullopt -> 1/D
  double tol = 1e-3;
  long max_pair_updates = 1'000'000;
};

struct SvrModel {
  Matrix support_vectors;  // one row per support vector
  Vector dual_coeffs;      // alpha - alpha* per support vector
  double bias = 0.0;
  double gamma = 0.0;
  double C = 0.0;
  double epsilon = 0.0;
};

double rbf_kernel(const Vector& x, const Vector& z, double gamma);

// Gram matrix of the training rows under the RBF kernel.
Matrix rbf_kernel_matrix(const Matrix& x, double gamma);

struct SmoSolution {
  Vector beta;  // alpha - alpha*, one per training row
  double bias = 0.0;
  long pair_updates = 0;
  double final_violation = 0.0;
};

// Core solver on a precomputed kernel matrix; fit_svr wraps it.
SmoSolution smo_solve(const Matrix& kernel, const Vector& y, double C, double epsilon,
                      double tol, long max_pair_updates);

// Dual objective in beta form: -1/2 b'Kb - eps*|b|_1 + y'b (to be maximized).
double svr_dual_objective(const Matrix& kernel, const Vector& y, const Vector& beta,
                          double epsilon);

SvrModel fit_svr(const Matrix& x, const Vector& y, const SvrParams& params = {});

double predict_svr(const SvrModel& model, const Vector& x);

}  // namespace crimenet
