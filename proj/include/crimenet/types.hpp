#pragma once

#include <Eigen/Dense>

namespace crimenet {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using IntMatrix = Eigen::MatrixXi;
using IntVector = Eigen::VectorXi;

}  // namespace crimenet
