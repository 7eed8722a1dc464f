#include "slke/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "slke/errors.hpp"

namespace slke {

namespace {

// Platform-independent uniform [0,1) from the raw 64-bit stream.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

struct KmeansRun {
  Labels labels;
  double wcss = std::numeric_limits<double>::infinity();
};

double sq_dist(const Matrix& points, Eigen::Index i, const Vector& center) {
  return (points.row(i).transpose() - center).squaredNorm();
}

Matrix kmeanspp_centers(const Matrix& points, int k, std::mt19937_64& rng) {
  const Eigen::Index n = points.rows();
  Matrix centers(k, points.cols());
  std::vector<double> d2(n, std::numeric_limits<double>::infinity());

  Eigen::Index first = std::min<Eigen::Index>(n - 1, static_cast<Eigen::Index>(uniform01(rng) * n));
  centers.row(0) = points.row(first);
  for (int c = 1; c < k; ++c) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], (points.row(i) - centers.row(c - 1)).squaredNorm());
      total += d2[i];
    }
    Eigen::Index pick = -1;
    if (total > 0.0) {
      const double r = uniform01(rng) * total;
      double cum = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        cum += d2[i];
        if (d2[i] > 0.0 && cum >= r) {
          pick = i;
          break;
        }
      }
      if (pick < 0) {  // round-off: fall back to the last positive-weight point
        for (Eigen::Index i = n - 1; i >= 0; --i)
          if (d2[i] > 0.0) {
            pick = i;
            break;
          }
      }
    }
    if (pick < 0) pick = c % n;  // all remaining points coincide with a center
    centers.row(c) = points.row(pick);
  }
  return centers;
}

KmeansRun lloyd(const Matrix& points, int k, std::uint64_t seed) {
  const Eigen::Index n = points.rows();
  std::mt19937_64 rng(seed);
  Matrix centers = kmeanspp_centers(points, k, rng);
  Labels assign(n, -1);
  constexpr int kMaxSweeps = 300;

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool changed = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      int best = 0;
      double best_d = (points.row(i) - centers.row(0)).squaredNorm();
      for (int c = 1; c < k; ++c) {
        const double d = (points.row(i) - centers.row(c)).squaredNorm();
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      if (assign[i] != best) {
        assign[i] = best;
        changed = true;
      }
    }
    if (!changed) break;

    Matrix sums = Matrix::Zero(k, points.cols());
    std::vector<int> sizes(k, 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      sums.row(assign[i]) += points.row(i);
      ++sizes[assign[i]];
    }
    std::vector<bool> taken(n, false);
    for (int c = 0; c < k; ++c) {
      if (sizes[c] > 0) {
        centers.row(c) = sums.row(c) / sizes[c];
        continue;
      }
      // Empty cluster: re-seed to the point farthest from its own center.
      Eigen::Index far = -1;
      double far_d = -1.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (taken[i] || sizes[assign[i]] <= 1) continue;
        const double d = (points.row(i) - centers.row(assign[i])).squaredNorm();
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      if (far >= 0) {
        centers.row(c) = points.row(far);
        taken[far] = true;
      }
    }
  }

  double wcss = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    wcss += (points.row(i) - centers.row(assign[i])).squaredNorm();
  return {std::move(assign), wcss};
}

}  // namespace

Matrix spectral_embedding(const Matrix& A, int k) {
  const Eigen::Index n = A.rows();
  if (A.cols() != n) throw DataError("affinity matrix must be square");
  if (!A.allFinite()) throw DataError("affinity matrix has non-finite entries");
  if (k < 2 || k > n) {
    throw DataError("cluster count " + std::to_string(k) + " outside [2, " +
                    std::to_string(n) + "]");
  }
  if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-10)
    throw DataError("affinity matrix is not symmetric to 1e-10");
  if (A.minCoeff() < 0.0) throw DataError("affinity matrix has negative entries");
  if (A.maxCoeff() == 0.0) throw DataError("degenerate affinity: all entries zero");

  Vector degrees = A.rowwise().sum();
  Vector dinv(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double d = degrees(i) == 0.0 ? 1e-12 : degrees(i);  // zero-degree guard
    dinv(i) = 1.0 / std::sqrt(d);
  }
  Matrix normalized = dinv.asDiagonal() * A * dinv.asDiagonal();

  Eigen::SelfAdjointEigenSolver<Matrix> eig(normalized);
  if (eig.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");

  // Largest eigenvalues first; ties keep the solver's index order.
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return eig.eigenvalues()(a) > eig.eigenvalues()(b);
  });

  Matrix embedding(n, k);
  for (int c = 0; c < k; ++c) {
    Vector col = eig.eigenvectors().col(order[c]);
    Eigen::Index imax = 0;
    col.cwiseAbs().maxCoeff(&imax);  // fix sign: largest-magnitude entry positive
    if (col(imax) < 0.0) col = -col;
    embedding.col(c) = col;
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    const double norm = embedding.row(i).norm();
    if (norm > 0.0) embedding.row(i) /= norm;
  }
  return embedding;
}

Labels kmeans(const Matrix& points, int k, int restarts, std::uint64_t seed) {
  const Eigen::Index n = points.rows();
  if (k < 1) throw DataError("kmeans needs k >= 1");
  if (n < k) throw DataError("kmeans needs at least k points");
  if (restarts < 1) throw DataError("kmeans needs at least 1 restart");

  KmeansRun best;
  for (int r = 0; r < restarts; ++r) {
    KmeansRun run = lloyd(points, k, seed + static_cast<std::uint64_t>(r));
    if (run.wcss < best.wcss) best = std::move(run);
  }
  return best.labels;
}

Labels spectral_clustering(const Matrix& A, int k, std::uint64_t seed, int restarts) {
  return kmeans(spectral_embedding(A, k), k, restarts, seed);
}

}  // namespace slke
