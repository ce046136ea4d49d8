#pragma once

#include "crimenet/types.hpp"

// Degree-2 polynomial regression with per-coordinate squares and no cross
// terms: y = a_0 + a_1 x_1 + a_2 x_1^2 + ... + a_{2D-1} x_D + a_{2D} x_D^2.
// Fitting is the minimum-norm least-squares solution, so rank-deficient
// designs are fine.

namespace crimenet {

// [1, x_1, x_1^2, ..., x_D, x_D^2]
Vector expand_quadratic(const Vector& x);

struct PolyRegModel {
  Vector coefficients;  // length 2D+1
  int dim = 0;          // D
};

PolyRegModel fit_polyreg(const Matrix& x, const Vector& y);

double predict_polyreg(const PolyRegModel& model, const Vector& x);

}  // namespace crimenet
