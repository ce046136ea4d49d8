#include "crimenet/svr.hpp"

#include <cmath>
#include <limits>

#include "crimenet/errors.hpp"

namespace crimenet {

double rbf_kernel(const Vector& x, const Vector& z, double gamma) {
  if (x.size() != z.size()) throw DimensionMismatch("rbf_kernel operands");
  if (!(gamma > 0.0)) throw InvalidHyperparameters("gamma must be positive");
  return std::exp(-gamma * (x - z).squaredNorm());
}

Matrix rbf_kernel_matrix(const Matrix& x, double gamma) {
  if (!(gamma > 0.0)) throw InvalidHyperparameters("gamma must be positive");
  Vector sq = x.rowwise().squaredNorm();
  Matrix dist = (-2.0 * x * x.transpose()).rowwise() + sq.transpose();
  dist.colwise() += sq;
  return (-gamma * dist.cwiseMax(0.0)).array().exp();
}

SmoSolution smo_solve(const Matrix& kernel, const Vector& y, double C, double epsilon,
                      double tol, long max_pair_updates) {
  const long n = y.size();
  if (kernel.rows() != n || kernel.cols() != n)
    throw DimensionMismatch("kernel matrix vs targets");
  if (!(C > 0.0) || !(epsilon >= 0.0)) throw InvalidHyperparameters("need C > 0, epsilon >= 0");

  // theta = (alpha_0..alpha_{n-1}, alpha*_0..alpha*_{n-1}); sign(u) = +1 for
  // the alpha half, -1 for the alpha* half. Gradient of the minimized dual:
  // G_u = sum_v Q_uv theta_v + p_u with Q_uv = s_u s_v K_uv, p = eps -/+ y.
  const long m2 = 2 * n;
  auto sign = [n](long u) { return u < n ? 1.0 : -1.0; };
  auto point = [n](long u) { return u < n ? u : u - n; };

  Vector theta = Vector::Zero(m2);
  Vector grad(m2);
  for (long u = 0; u < m2; ++u) grad[u] = epsilon - sign(u) * y[point(u)];

  SmoSolution solution;
  double m_up = 0.0, m_low = 0.0;
  while (true) {
    // Maximal violating pair over -s_u G_u.
    long i = -1, j = -1;
    m_up = -std::numeric_limits<double>::infinity();
    m_low = std::numeric_limits<double>::infinity();
    for (long u = 0; u < m2; ++u) {
      const double score = -sign(u) * grad[u];
      const bool can_up = sign(u) > 0 ? theta[u] < C : theta[u] > 0.0;
      const bool can_down = sign(u) > 0 ? theta[u] > 0.0 : theta[u] < C;
      if (can_up && score > m_up) {
        m_up = score;
        i = u;
      }
      if (can_down && score < m_low) {
        m_low = score;
        j = u;
      }
    }
    solution.final_violation = m_up - m_low;
    if (i < 0 || j < 0 || m_up - m_low < tol) break;
    if (solution.pair_updates >= max_pair_updates) break;

    const double si = sign(i), sj = sign(j);
    const long pi = point(i), pj = point(j);
    double curvature = kernel(pi, pi) + kernel(pj, pj) - 2.0 * kernel(pi, pj);
    if (curvature < 1e-12) curvature = 1e-12;

    // Step along d (d_i = s_i, d_j = -s_j), which keeps sum(s theta) fixed.
    double step = (m_up - m_low) / curvature;
    step = std::min(step, si > 0 ? C - theta[i] : theta[i]);
    step = std::min(step, sj > 0 ? theta[j] : C - theta[j]);

    theta[i] += si * step;
    theta[j] -= sj * step;
    for (long u = 0; u < m2; ++u)
      grad[u] += step * sign(u) * (kernel(point(u), pi) - kernel(point(u), pj));
    ++solution.pair_updates;
  }

  solution.beta.resize(n);
  for (long k = 0; k < n; ++k) solution.beta[k] = theta[k] - theta[k + n];

  // For free variables s_u G_u equals the constraint multiplier -b; without
  // free variables the optimum admits a whole bias interval and we take its
  // midpoint. Variables within bound_tol of a bound count as bound so the
  // interval is the canonical one.
  const double bound_tol = 1e-8 * C;
  double up = -std::numeric_limits<double>::infinity();
  double low = std::numeric_limits<double>::infinity();
  for (long u = 0; u < m2; ++u) {
    const double score = -sign(u) * grad[u];
    const bool can_up = sign(u) > 0 ? theta[u] < C - bound_tol : theta[u] > bound_tol;
    const bool can_down = sign(u) > 0 ? theta[u] > bound_tol : theta[u] < C - bound_tol;
    if (can_up && score > up) up = score;
    if (can_down && score < low) low = score;
  }
  solution.bias = std::isfinite(up) && std::isfinite(low) ? 0.5 * (up + low)
                  : std::isfinite(m_up) && std::isfinite(m_low) ? 0.5 * (m_up + m_low)
                                                                : 0.0;
  return solution;
}

double svr_dual_objective(const Matrix& kernel, const Vector& y, const Vector& beta,
                          double epsilon) {
  return -0.5 * beta.dot(kernel * beta) - epsilon * beta.cwiseAbs().sum() + y.dot(beta);
}

SvrModel fit_svr(const Matrix& x, const Vector& y, const SvrParams& params) {
  if (x.rows() != y.size()) throw DimensionMismatch("rows of X and y differ");
  if (x.rows() < 1) throw EmptyInput("fit_svr needs at least one sample");
  const double gamma = params.gamma ? *params.gamma : 1.0 / static_cast<double>(x.cols());
  if (!(gamma > 0.0)) throw InvalidHyperparameters("gamma must be positive");
  if (!(params.C > 0.0) || !(params.epsilon >= 0.0))
    throw InvalidHyperparameters("need C > 0, epsilon >= 0");

  Matrix kernel = rbf_kernel_matrix(x, gamma);
  SmoSolution solution =
      smo_solve(kernel, y, params.C, params.epsilon, params.tol, params.max_pair_updates);

  SvrModel model;
  model.bias = solution.bias;
  model.gamma = gamma;
  model.C = params.C;
  model.epsilon = params.epsilon;
  long n_sv = 0;
  for (long k = 0; k < solution.beta.size(); ++k)
    if (solution.beta[k] != 0.0) ++n_sv;
  model.support_vectors.resize(n_sv, x.cols());
  model.dual_coeffs.resize(n_sv);
  long row = 0;
  for (long k = 0; k < solution.beta.size(); ++k) {
    if (solution.beta[k] == 0.0) continue;
    model.support_vectors.row(row) = x.row(k);
    model.dual_coeffs[row] = solution.beta[k];
    ++row;
  }
  return model;
}

double predict_svr(const SvrModel& model, const Vector& x) {
  if (model.support_vectors.rows() > 0 && x.size() != model.support_vectors.cols())
    throw DimensionMismatch("feature dimension vs model");
  double value = model.bias;
  for (Eigen::Index v = 0; v < model.support_vectors.rows(); ++v) {
    value += model.dual_coeffs[v] *
             rbf_kernel(model.support_vectors.row(v).transpose(), x, model.gamma);
  }
  return value;
}

}  // namespace crimenet
