#pragma once

#include <Eigen/Dense>
#include <vector>

namespace slke {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Cluster/class assignments, one entry per sample.
using Labels = std::vector<int>;

}  // namespace slke
