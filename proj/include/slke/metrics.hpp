#pragma once

#include <Eigen/Dense>
#include <vector>

#include "slke/types.hpp"

namespace slke {

// Minimum-cost square assignment (Kuhn-Munkres). Returns the column
// assigned to each row.
std::vector<int> hungarian(const Matrix& cost);

// k_true x k_pred count matrix; labels are densified by first appearance.
Eigen::MatrixXi contingency_table(const Labels& truth, const Labels& pred);

// Fraction of samples matched under the optimal cluster-to-class mapping.
double accuracy(const Labels& truth, const Labels& pred);

// Mutual information normalized by max(H(truth), H(pred)), natural log.
double nmi(const Labels& truth, const Labels& pred);

}  // namespace slke
