#pragma once

#include <Eigen/Dense>

namespace sparsevb {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

}  // namespace sparsevb
