#pragma once

#include <Eigen/Dense>
#include <limits>

namespace ellipt {

using Vec = Eigen::VectorXd;
using CVec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXd;

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace ellipt
