#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "crimenet/ar.hpp"
#include "crimenet/errors.hpp"
#include "crimenet/polyreg.hpp"
#include "crimenet/svr.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace crimenet;

// ---------------------------------------------------------------- polyreg --

TEST_CASE("quadratic expansion") {
  Vector one(1);
  one << 2;
  Vector phi = expand_quadratic(one);
  CHECK(phi.size() == 3);
  CHECK(phi[0] == 1);
  CHECK(phi[1] == 2);
  CHECK(phi[2] == 4);

  Vector zeros = Vector::Zero(4);
  phi = expand_quadratic(zeros);
  CHECK(phi[0] == 1);
  CHECK(phi.tail(8).cwiseAbs().maxCoeff() == 0.0);

  Vector two(2);
  two << 1, -1;
  phi = expand_quadratic(two);
  Vector expected(5);
  expected << 1, 1, 1, -1, 1;
  CHECK((phi - expected).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("exact recovery of a planted 1-d quadratic") {
  Matrix x(3, 1);
  x << 0, 1, 2;
  Vector y(3);
  y << 1, 6, 17;  // 1 + 2x + 3x^2
  PolyRegModel model = fit_polyreg(x, y);
  CHECK(model.coefficients[0] == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(model.coefficients[1] == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(model.coefficients[2] == doctest::Approx(3.0).epsilon(1e-8));
}

TEST_CASE("zero targets give the all-zero minimum-norm model") {
  testutil::Rng rng(2);
  Matrix x(6, 3);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 3; ++j) x(i, j) = rng.uniform(-1, 1);
  PolyRegModel model = fit_polyreg(x, Vector::Zero(6));
  CHECK(model.coefficients.cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("duplicated feature columns still fit; predictions match the oracle") {
  testutil::Rng rng(8);
  Matrix x(15, 3);
  for (int i = 0; i < 15; ++i) {
    x(i, 0) = rng.uniform(-1, 1);
    x(i, 1) = rng.uniform(-1, 1);
    x(i, 2) = x(i, 1);  // duplicate coordinate duplicates its expansion too
  }
  Vector y(15);
  for (int i = 0; i < 15; ++i) y[i] = rng.uniform(-10, 10);
  PolyRegModel model = fit_polyreg(x, y);

  Matrix phi(15, 7);
  for (int i = 0; i < 15; ++i) phi.row(i) = expand_quadratic(x.row(i).transpose()).transpose();
  Vector fitted = phi * model.coefficients;
  Vector expected = oracle::dedup_least_squares_fitted(phi, y);
  CHECK((fitted - expected).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("predict_polyreg") {
  PolyRegModel model;
  model.dim = 1;
  model.coefficients = Vector(3);
  model.coefficients << 1, 2, 3;
  Vector x(1);
  x << 2;
  CHECK(predict_polyreg(model, x) == doctest::Approx(17.0));

  model.coefficients.setZero();
  CHECK(predict_polyreg(model, x) == 0.0);

  model.coefficients << 5, 0, 0;
  CHECK(predict_polyreg(model, x) == doctest::Approx(5.0));

  Vector wrong(2);
  CHECK_THROWS_AS(predict_polyreg(model, wrong), DimensionMismatch);
}

TEST_CASE("fitted residual beats 100 random coefficient vectors") {
  testutil::Rng rng(3);
  Matrix x(25, 2);
  Vector y(25);
  for (int i = 0; i < 25; ++i) {
    x(i, 0) = rng.uniform(-2, 2);
    x(i, 1) = rng.uniform(-2, 2);
    y[i] = rng.uniform(-5, 5);
  }
  PolyRegModel model = fit_polyreg(x, y);
  Matrix phi(25, 5);
  for (int i = 0; i < 25; ++i) phi.row(i) = expand_quadratic(x.row(i).transpose()).transpose();
  double best = (phi * model.coefficients - y).squaredNorm();
  for (int trial = 0; trial < 100; ++trial) {
    Vector candidate(5);
    for (int j = 0; j < 5; ++j) candidate[j] = rng.uniform(-10, 10);
    CHECK(best <= (phi * candidate - y).squaredNorm() + 1e-9);
  }
}

// -------------------------------------------------------------------- svr --

TEST_CASE("rbf kernel values") {
  Vector x(2), z(2);
  x << 1, 2;
  z << 1, 2;
  CHECK(rbf_kernel(x, z, 0.7) == doctest::Approx(1.0));
  z << 1, 3;  // squared distance 1
  CHECK(rbf_kernel(x, z, 1.0) == doctest::Approx(0.36787944117144233));
  double previous = 1.0;
  for (double gamma : {0.5, 1.0, 2.0, 4.0, 8.0}) {
    double k = rbf_kernel(x, z, gamma);
    CHECK(k < previous);
    previous = k;
  }
  Vector wrong(3);
  CHECK_THROWS_AS(rbf_kernel(x, wrong, 1.0), DimensionMismatch);
  CHECK_THROWS_AS(rbf_kernel(x, z, 0.0), InvalidHyperparameters);
}

TEST_CASE("single training point is reproduced everywhere") {
  Matrix x(1, 2);
  x << 0.3, -0.7;
  Vector y(1);
  y << 4.2;
  SvrModel model = fit_svr(x, y, {});
  CHECK(predict_svr(model, x.row(0).transpose()) == doctest::Approx(4.2));
  Vector far(2);
  far << 100, 100;
  CHECK(predict_svr(model, far) == doctest::Approx(4.2));
  CHECK(model.support_vectors.rows() == 0);
}

TEST_CASE("constant targets are reproduced everywhere") {
  testutil::Rng rng(5);
  Matrix x(10, 3);
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 3; ++j) x(i, j) = rng.uniform(-1, 1);
  SvrModel model = fit_svr(x, Vector::Constant(10, 2.5), {});
  Vector probe(3);
  probe << 0.1, 0.2, 0.3;
  CHECK(predict_svr(model, probe) == doctest::Approx(2.5));
}

TEST_CASE("predict_svr basics") {
  SvrModel model;
  model.bias = 3.0;
  model.gamma = 1.0;
  model.support_vectors = Matrix(0, 2);
  model.dual_coeffs = Vector(0);
  Vector x(2);
  x << 1, 1;
  CHECK(predict_svr(model, x) == doctest::Approx(3.0));

  model.support_vectors = Matrix(1, 2);
  model.support_vectors << 1, 1;
  model.dual_coeffs = Vector(1);
  model.dual_coeffs << 1.0;
  model.bias = 0.0;
  CHECK(predict_svr(model, x) == doctest::Approx(1.0));
}

TEST_CASE("SMO matches the projected-gradient QP oracle on 8 random samples") {
  testutil::Rng rng(11);
  Matrix x(8, 2);
  Vector y(8);
  for (int i = 0; i < 8; ++i) {
    x(i, 0) = rng.uniform(-1, 1);
    x(i, 1) = rng.uniform(-1, 1);
    y[i] = std::sin(2 * x(i, 0)) + 0.5 * x(i, 1);
  }
  const double gamma = 0.5;
  Matrix kernel = rbf_kernel_matrix(x, gamma);
  SmoSolution smo = smo_solve(kernel, y, 1.0, 0.1, 1e-6, 1'000'000);
  oracle::SvrQpOracle qp(kernel, y, 1.0, 0.1);
  oracle::QpSolution reference = qp.solve(1e-7);

  for (int k = 0; k < 8; ++k) {
    double mine = kernel.row(k).dot(smo.beta) + smo.bias;
    double theirs = kernel.row(k).dot(reference.beta) + reference.bias;
    CHECK(mine == doctest::Approx(theirs).epsilon(1e-4));
  }
  double obj_smo = svr_dual_objective(kernel, y, smo.beta, 0.1);
  double obj_qp = qp.objective_beta(reference.beta);
  CHECK(obj_smo >= obj_qp - 1e-6);
}

TEST_CASE("KKT consistency at the default tolerance") {
  testutil::Rng rng(13);
  const double C = 2.0, eps = 0.15, gamma = 0.8;
  Matrix x(20, 2);
  Vector y(20);
  for (int i = 0; i < 20; ++i) {
    x(i, 0) = rng.uniform(-1, 1);
    x(i, 1) = rng.uniform(-1, 1);
    y[i] = x(i, 0) * x(i, 1) + 0.2 * rng.normal();
  }
  Matrix kernel = rbf_kernel_matrix(x, gamma);
  SmoSolution solution = smo_solve(kernel, y, C, eps, 1e-3, 1'000'000);

  CHECK(std::abs(solution.beta.sum()) <= 1e-8);
  CHECK(solution.beta.cwiseAbs().maxCoeff() <= C + 1e-12);

  const double slack = 2e-3 * std::max(1.0, y.cwiseAbs().maxCoeff());
  for (int k = 0; k < 20; ++k) {
    double residual = y[k] - (kernel.row(k).dot(solution.beta) + solution.bias);
    if (std::abs(residual) < eps - slack) {
      CHECK(std::abs(solution.beta[k]) <= 1e-3 * C);
    }
    if (std::abs(residual) > eps + slack) {
      CHECK(std::abs(solution.beta[k]) >= C * (1.0 - 1e-3));
    }
  }
}

TEST_CASE("kernel rescaling invariance") {
  testutil::Rng rng(17);
  Matrix x(12, 2);
  Vector y(12);
  for (int i = 0; i < 12; ++i) {
    x(i, 0) = rng.uniform(-1, 1);
    x(i, 1) = rng.uniform(-1, 1);
    y[i] = x(i, 0) - x(i, 1);
  }
  const double scale = 3.0;
  SvrParams params;
  params.gamma = 1.0;
  params.tol = 1e-8;
  SvrModel base = fit_svr(x, y, params);
  params.gamma = 1.0 / (scale * scale);
  SvrModel scaled = fit_svr(Matrix(scale * x), y, params);
  for (int k = 0; k < 12; ++k) {
    double a = predict_svr(base, x.row(k).transpose());
    double b = predict_svr(scaled, Vector(scale * x.row(k).transpose()));
    CHECK(a == doctest::Approx(b).epsilon(1e-6));
  }
}

TEST_CASE("hyperparameter validation") {
  Matrix x(2, 1);
  x << 0, 1;
  Vector y(2);
  y << 0, 1;
  SvrParams params;
  params.C = -1;
  CHECK_THROWS_AS(fit_svr(x, y, params), InvalidHyperparameters);
  params = {};
  params.epsilon = -0.1;
  CHECK_THROWS_AS(fit_svr(x, y, params), InvalidHyperparameters);
  params = {};
  params.gamma = -2.0;
  CHECK_THROWS_AS(fit_svr(x, y, params), InvalidHyperparameters);
}

// --------------------------------------------------------------------- ar --

TEST_CASE("constant series forecast stays constant") {
  Vector series = Vector::Constant(20, 6.0);
  ArModel model = fit_ar(series, 2, LagMode::monthly);
  auto forecast = forecast_ar(model, series, 5);
  for (double value : forecast) CHECK(value == doctest::Approx(6.0).epsilon(1e-8));
}

TEST_CASE("linear series continue the line") {
  Vector series(30);
  for (int i = 0; i < 30; ++i) series[i] = i;
  ArModel model = fit_ar(series, 2, LagMode::monthly);
  auto forecast = forecast_ar(model, series, 3);
  CHECK(forecast[0] == doctest::Approx(30.0).epsilon(1e-6));
  CHECK(forecast[1] == doctest::Approx(31.0).epsilon(1e-6));
  CHECK(forecast[2] == doctest::Approx(32.0).epsilon(1e-6));
}

TEST_CASE("annual mode reproduces a 12-month periodic series") {
  Vector series(48);
  for (int i = 0; i < 48; ++i) series[i] = 10.0 + 3.0 * std::sin(2 * 3.14159265 * (i % 12) / 12.0);
  ArModel model = fit_ar(series, 2, LagMode::annual);
  auto forecast = forecast_ar(model, series, 12);
  for (int h = 0; h < 12; ++h)
    CHECK(forecast[h] == doctest::Approx(series[36 + h]).epsilon(1e-8));
}

TEST_CASE("zero and intercept-only models forecast flat") {
  ArModel zero;
  zero.lag = 2;
  zero.phi = Vector::Zero(2);
  Vector history = Vector::Constant(4, 9.0);
  for (double value : forecast_ar(zero, history, 3)) CHECK(value == 0.0);

  ArModel intercept = zero;
  intercept.intercept = 7.0;
  for (double value : forecast_ar(intercept, history, 3)) CHECK(value == doctest::Approx(7.0));
}

TEST_CASE("length preconditions") {
  CHECK_THROWS_AS(fit_ar(Vector::Zero(2), 2, LagMode::monthly), SeriesTooShort);
  CHECK_NOTHROW(fit_ar(Vector::Zero(3), 2, LagMode::monthly));
  CHECK_THROWS_AS(fit_ar(Vector::Zero(35), 2, LagMode::annual), SeriesTooShort);
  CHECK_NOTHROW(fit_ar(Vector::Zero(36), 2, LagMode::annual));

  ArModel model;
  model.lag = 2;
  model.mode = LagMode::annual;
  model.phi = Vector::Zero(2);
  CHECK_THROWS_AS(forecast_ar(model, Vector::Zero(23), 1), HistoryTooShort);
  CHECK_NOTHROW(forecast_ar(model, Vector::Zero(24), 1));
}

TEST_CASE("pooled fit uses rows from every series") {
  // two constant series at different levels: pooled LS must compromise,
  // y = intercept + phi1*y1 + phi2*y2 solved min-norm over both levels
  std::vector<Vector> series = {Vector::Constant(10, 2.0), Vector::Constant(10, 4.0)};
  ArModel model = fit_ar_pooled(series, 2, LagMode::monthly);
  // exact fit exists: intercept 0, phi sum 1 on both levels
  double at2 = model.intercept + model.phi.sum() * 2.0;
  double at4 = model.intercept + model.phi.sum() * 4.0;
  CHECK(at2 == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(at4 == doctest::Approx(4.0).epsilon(1e-8));
}
