#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "slke/types.hpp"

namespace slke {

enum class Regularizer {
  LowRank,  // nuclear norm
  Sparse,   // elementwise l1 norm
};

struct SolverConfig {
  Regularizer regularizer = Regularizer::Sparse;
  double gamma = 1e-3;  // regularization weight, > 0
  double mu = 1.0;      // ADMM penalty, > 0, held fixed
  int max_iters = 300;
  double tol = 1e-4;  // max-norm feasibility tolerance
  std::uint64_t seed = 0;
  bool nonneg_projection = true;
  std::string trace_path;  // when non-empty, per-iteration CSV is written here
};

struct SlkeResult {
  Matrix Z;
  std::vector<double> objective_history;
  // (||Z - J||_inf, ||Z - W||_inf) after each iteration
  std::vector<std::pair<double, double>> residual_history;
  int iterations = 0;
  bool converged = false;
};

// Minimizer of the augmented-Lagrangian block in J:
// solves (mu*I + K*W*W^T*K^T) J = mu*Z + Y1 + K*W*K^T.
Matrix update_J(const Matrix& K, const Matrix& W, const Matrix& Z,
                const Matrix& Y1, double mu);

// Symmetric counterpart: (mu*I + K^T*J*J^T*K) W = mu*Z + Y2 + K^T*J*K.
Matrix update_W(const Matrix& K, const Matrix& J, const Matrix& Z,
                const Matrix& Y2, double mu);

// Singular value thresholding: U * diag(max(sigma - tau, 0)) * V^T.
Matrix prox_nuclear(const Matrix& H, double tau);

// Elementwise soft-thresholding: max(|h| - tau, 0) * sign(h).
Matrix prox_l1(const Matrix& H, double tau);

// 0.5 * ||K - Z^T K Z||_F^2 + gamma * (||Z||_* or ||Z||_1).
double objective(const Matrix& K, const Matrix& Z, double gamma,
                 Regularizer reg);

// ADMM over the split (Z, J, W) with multipliers (Y1, Y2). W and Z start
// i.i.d. uniform [0,1) from cfg.seed; Y1 = Y2 = 0. Each iteration runs
// the J update, the W update, the prox step on
// H = (J + W - (Y1 + Y2)/mu) / 2 with threshold gamma/(2*mu), an optional
// clamp of negative Z entries, then the multiplier ascent. Stops when
// max(||Z-J||_inf, ||Z-W||_inf) <= tol or max_iters is reached.
SlkeResult slke_fit(const Matrix& K, const SolverConfig& cfg);

// (|Z| + |Z^T|) / 2: symmetric nonnegative affinity for graph construction.
Matrix symmetrize_affinity(const Matrix& Z);

}  // namespace slke
