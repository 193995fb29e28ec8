#pragma once

#include <Eigen/Dense>

namespace nomarch {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using IMatrix = Eigen::MatrixXi;

}  // namespace nomarch
