#pragma once

#include <string>
#include <vector>

#include "crimenet/types.hpp"

// Auto-regression on a crime-count series: y_i is fit as an affine function
// of its lag previous values, either consecutive months (monthly mode) or the
// same month of previous years (annual mode, 12-month stride). Least squares,
// minimum-norm under rank deficiency.

namespace crimenet {

enum class LagMode { monthly, annual };

std::string to_string(LagMode mode);

struct ArModel {
  int lag = 2;
  LagMode mode = LagMode::monthly;
  double intercept = 0.0;
  Vector phi;  // lag coefficients, phi[k] multiplies the value (k+1) strides back
};

int lag_stride(LagMode mode);

ArModel fit_ar(const Vector& series, int lag = 2, LagMode mode = LagMode::monthly);

// Pooled fit: one coefficient set estimated from the rows of every series.
ArModel fit_ar_pooled(const std::vector<Vector>& series, int lag = 2,
                      LagMode mode = LagMode::monthly);

// Recursive forecasts; each value is appended to the history before the next
// step.
std::vector<double> forecast_ar(const ArModel& model, const Vector& history, int horizon);

}  // namespace crimenet
