#pragma once

#include <string>
#include <vector>

#include "slke/types.hpp"

namespace slke {

struct KernelSpec {
  enum class Kind { Gaussian, Linear, Polynomial };

  Kind kind = Kind::Linear;
  double t = 1.0;  // gaussian width factor, > 0
  double a = 0.0;  // polynomial offset
  int b = 2;       // polynomial degree, >= 1

  static KernelSpec gaussian(double t);
  static KernelSpec linear();
  static KernelSpec polynomial(double a, int b);

  // "gaussian_t0.01", "linear", "poly_a1_b2"
  std::string name() const;

  // Accepts "gaussian:<t>", "linear", "poly:<a>:<b>" (and the name() forms).
  static KernelSpec parse(const std::string& text);
};

// Largest Euclidean distance between sample columns of X.
double max_pairwise_distance(const Matrix& X);

// Pairwise kernel matrix over the columns of X. Symmetry is exact by
// construction (entries computed for i <= j and mirrored).
Matrix build_kernel(const Matrix& X, const KernelSpec& spec);

// Divides every element by the largest element. Idempotent; requires a
// positive maximum. Kernels with negative entries may leave [0,1].
Matrix rescale_kernel(const Matrix& K);

// The 12-kernel evaluation grid: seven gaussian widths
// t in {0.01, 0.05, 0.1, 1, 10, 50, 100}, the linear kernel, and four
// polynomial kernels with (a, b) in {0,1} x {2,4}.
std::vector<KernelSpec> standard_grid();

}  // namespace slke
