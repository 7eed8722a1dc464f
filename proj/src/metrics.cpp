#include "slke/metrics.hpp"

#include <cmath>
#include <limits>
#include <unordered_map>

#include "slke/errors.hpp"

namespace slke {

namespace {

Labels densify(const Labels& labels) {
  Labels out;
  out.reserve(labels.size());
  std::unordered_map<int, int> ids;
  for (int l : labels) {
    auto [it, inserted] = ids.emplace(l, static_cast<int>(ids.size()));
    out.push_back(it->second);
  }
  return out;
}

void check_lengths(const Labels& truth, const Labels& pred) {
  if (truth.size() != pred.size()) {
    throw DataError("label length mismatch: " + std::to_string(truth.size()) + " vs " +
                    std::to_string(pred.size()));
  }
  if (truth.empty()) throw DataError("empty label vectors");
}

double entropy(const std::vector<int>& counts, double n) {
  double h = 0.0;
  for (int c : counts) {
    if (c == 0) continue;
    const double p = c / n;
    h -= p * std::log(p);
  }
  return h;
}

}  // namespace

// Shortest-augmenting-path variant with row/column potentials, O(n^3).
std::vector<int> hungarian(const Matrix& cost) {
  if (cost.rows() != cost.cols()) throw DataError("hungarian needs a square cost matrix");
  if (!cost.allFinite()) throw DataError("hungarian needs finite costs");
  const int n = static_cast<int>(cost.rows());
  constexpr double kInf = std::numeric_limits<double>::infinity();

  // 1-based internally; p[j] is the row matched to column j, p[0] the row
  // currently seeking a column.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, kInf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const int i0 = p[j0];
      int j1 = 0;
      double delta = kInf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<int> assignment(n, -1);
  for (int j = 1; j <= n; ++j)
    if (p[j] != 0) assignment[p[j] - 1] = j - 1;
  return assignment;
}

Eigen::MatrixXi contingency_table(const Labels& truth, const Labels& pred) {
  check_lengths(truth, pred);
  const Labels t = densify(truth);
  const Labels q = densify(pred);
  const int kt = count_classes(t);
  const int kp = count_classes(q);
  Eigen::MatrixXi counts = Eigen::MatrixXi::Zero(kt, kp);
  for (std::size_t i = 0; i < t.size(); ++i) counts(t[i], q[i]) += 1;
  return counts;
}

double accuracy(const Labels& truth, const Labels& pred) {
  const Eigen::MatrixXi counts = contingency_table(truth, pred);
  const int side = static_cast<int>(std::max(counts.rows(), counts.cols()));

  // Clusters are mapped onto classes: rows of the cost matrix are predicted
  // clusters, columns are true classes, padded square with zero counts.
  Matrix negated = Matrix::Zero(side, side);
  negated.block(0, 0, counts.cols(), counts.rows()) =
      -counts.transpose().cast<double>();
  const std::vector<int> assign = hungarian(negated);

  long matched = 0;
  for (int cluster = 0; cluster < counts.cols(); ++cluster) {
    const int cls = assign[cluster];
    if (cls < counts.rows()) matched += counts(cls, cluster);
  }
  return static_cast<double>(matched) / static_cast<double>(truth.size());
}

double nmi(const Labels& truth, const Labels& pred) {
  const Eigen::MatrixXi counts = contingency_table(truth, pred);
  const double n = static_cast<double>(truth.size());

  std::vector<int> row_sums(counts.rows(), 0), col_sums(counts.cols(), 0);
  for (int i = 0; i < counts.rows(); ++i)
    for (int j = 0; j < counts.cols(); ++j) {
      row_sums[i] += counts(i, j);
      col_sums[j] += counts(i, j);
    }

  double mi = 0.0;
  for (int i = 0; i < counts.rows(); ++i) {
    for (int j = 0; j < counts.cols(); ++j) {
      const int c = counts(i, j);
      if (c == 0) continue;  // 0 * log(0/x) contributes 0
      const double joint = c / n;
      mi += joint * std::log(joint / ((row_sums[i] / n) * (col_sums[j] / n)));
    }
  }

  const double h = std::max(entropy(row_sums, n), entropy(col_sums, n));
  if (h == 0.0) return 1.0;  // both partitions are a single cluster
  return mi / h;
}

}  // namespace slke
