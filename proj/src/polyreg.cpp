#include "crimenet/polyreg.hpp"

#include "crimenet/errors.hpp"
#include "crimenet/linalg.hpp"

namespace crimenet {

Vector expand_quadratic(const Vector& x) {
  Vector phi(2 * x.size() + 1);
  phi[0] = 1.0;
  for (Eigen::Index d = 0; d < x.size(); ++d) {
    phi[1 + 2 * d] = x[d];
    phi[2 + 2 * d] = x[d] * x[d];
  }
  return phi;
}

PolyRegModel fit_polyreg(const Matrix& x, const Vector& y) {
  if (x.rows() != y.size()) throw DimensionMismatch("rows of X and y differ");
  if (x.rows() < 1) throw EmptyInput("fit_polyreg needs at least one sample");

  Matrix phi(x.rows(), 2 * x.cols() + 1);
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    phi.row(i) = expand_quadratic(x.row(i).transpose()).transpose();

  PolyRegModel model;
  model.dim = static_cast<int>(x.cols());
  model.coefficients = minimum_norm_least_squares(phi, y);
  return model;
}

double predict_polyreg(const PolyRegModel& model, const Vector& x) {
  if (x.size() != model.dim) throw DimensionMismatch("feature dimension vs model");
  return model.coefficients.dot(expand_quadratic(x));
}

}  // namespace crimenet
