#include "crimenet/ar.hpp"

#include "crimenet/errors.hpp"
#include "crimenet/linalg.hpp"

namespace crimenet {

std::string to_string(LagMode mode) { return mode == LagMode::monthly ? "monthly" : "annual"; }

int lag_stride(LagMode mode) { return mode == LagMode::monthly ? 1 : 12; }

namespace {

long min_series_length(int lag, LagMode mode) {
  // Monthly needs one usable row; annual needs a year of them.
  return static_cast<long>(lag_stride(mode)) * lag + (mode == LagMode::annual ? 12 : 1);
}

void append_rows(const Vector& series, int lag, LagMode mode, std::vector<Vector>& rows,
                 std::vector<double>& targets) {
  const int stride = lag_stride(mode);
  for (long i = static_cast<long>(stride) * lag; i < series.size(); ++i) {
    Vector row(lag + 1);
    row[0] = 1.0;
    for (int k = 1; k <= lag; ++k) row[k] = series[i - static_cast<long>(stride) * k];
    rows.push_back(std::move(row));
    targets.push_back(series[i]);
  }
}

ArModel fit_rows(std::vector<Vector>& rows, std::vector<double>& targets, int lag,
                 LagMode mode) {
  Matrix x(static_cast<Eigen::Index>(rows.size()), lag + 1);
  Vector y(static_cast<Eigen::Index>(targets.size()));
  for (size_t r = 0; r < rows.size(); ++r) {
    x.row(static_cast<Eigen::Index>(r)) = rows[r].transpose();
    y[static_cast<Eigen::Index>(r)] = targets[r];
  }
  Vector solution = minimum_norm_least_squares(x, y);

  ArModel model;
  model.lag = lag;
  model.mode = mode;
  model.intercept = solution[0];
  model.phi = solution.tail(lag);
  return model;
}

}  // namespace

ArModel fit_ar(const Vector& series, int lag, LagMode mode) {
  if (lag < 1) throw InvalidHyperparameters("lag must be >= 1");
  if (series.size() < min_series_length(lag, mode))
    throw SeriesTooShort(std::to_string(series.size()) + " < " +
                         std::to_string(min_series_length(lag, mode)));
  std::vector<Vector> rows;
  std::vector<double> targets;
  append_rows(series, lag, mode, rows, targets);
  return fit_rows(rows, targets, lag, mode);
}

ArModel fit_ar_pooled(const std::vector<Vector>& series, int lag, LagMode mode) {
  if (lag < 1) throw InvalidHyperparameters("lag must be >= 1");
  std::vector<Vector> rows;
  std::vector<double> targets;
  for (const Vector& s : series) {
    if (s.size() >= min_series_length(lag, mode)) append_rows(s, lag, mode, rows, targets);
  }
  if (rows.empty()) throw SeriesTooShort("no series long enough for the pooled fit");
  return fit_rows(rows, targets, lag, mode);
}

std::vector<double> forecast_ar(const ArModel& model, const Vector& history, int horizon) {
  const int stride = lag_stride(model.mode);
  const long needed = static_cast<long>(stride) * model.lag;
  if (history.size() < needed)
    throw HistoryTooShort(std::to_string(history.size()) + " < " + std::to_string(needed));

  std::vector<double> buffer(history.data(), history.data() + history.size());
  std::vector<double> out;
  out.reserve(horizon);
  for (int h = 0; h < horizon; ++h) {
    const long n = static_cast<long>(buffer.size());
    double value = model.intercept;
    for (int k = 1; k <= model.lag; ++k)
      value += model.phi[k - 1] * buffer[n - static_cast<long>(stride) * k];
    buffer.push_back(value);
    out.push_back(value);
  }
  return out;
}

}  // namespace crimenet
