#pragma once

#include <cstdint>

#include "slke/types.hpp"

namespace slke {

// Row-normalized top-k eigenvector embedding of D^{-1/2} A D^{-1/2}.
// A must be square, symmetric to 1e-10, nonnegative and not all zero.
// Zero-degree rows map to zero embedding rows.
Matrix spectral_embedding(const Matrix& A, int k);

// Lloyd's algorithm with k-means++ seeding over the rows of points.
// Runs `restarts` independent starts (seeds seed+0 .. seed+restarts-1)
// and returns the labels of the run with the lowest within-cluster sum
// of squares. Empty clusters are re-seeded to the farthest point.
Labels kmeans(const Matrix& points, int k, int restarts, std::uint64_t seed);

Labels spectral_clustering(const Matrix& A, int k, std::uint64_t seed,
                           int restarts = 20);

}  // namespace slke
