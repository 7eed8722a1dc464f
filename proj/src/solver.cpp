#include "slke/solver.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <Eigen/SVD>

#include <cmath>
#include <fstream>
#include <random>

#include "slke/errors.hpp"
#include "text.hpp"

namespace slke {

namespace {

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

void check_square_match(const Matrix& K, const Matrix& a, const Matrix& b,
                        const Matrix& c) {
  const Eigen::Index n = K.rows();
  if (K.cols() != n || a.rows() != n || a.cols() != n || b.rows() != n ||
      b.cols() != n || c.rows() != n || c.cols() != n) {
    throw DataError("solver matrices must all be n x n");
  }
}

// Solves the SPD system (mu*I + M*M^T) X = rhs. Cholesky first; the mu*I
// shift makes failure unexpected, but fall back to a pivoted solve.
Matrix solve_shifted_gram(const Matrix& M, const Matrix& rhs, double mu) {
  const Eigen::Index n = M.rows();
  Matrix lhs(n, n);
  lhs.noalias() = M * M.transpose();
  lhs.diagonal().array() += mu;

  Eigen::LLT<Matrix> llt(lhs);
  if (llt.info() == Eigen::Success) return llt.solve(rhs);

  Eigen::PartialPivLU<Matrix> lu(lhs);
  Matrix x = lu.solve(rhs);
  if (!x.allFinite()) throw NumericalError("linear system solve failed");
  return x;
}

void write_trace(const std::string& path, const SlkeResult& result) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write trace file: " + path);
  out << "iteration,objective,residual_j,residual_w\n";
  for (std::size_t i = 0; i < result.objective_history.size(); ++i) {
    out << (i + 1) << ',' << detail::format_double(result.objective_history[i]) << ','
        << detail::format_double(result.residual_history[i].first) << ','
        << detail::format_double(result.residual_history[i].second) << '\n';
  }
}

}  // namespace

Matrix update_J(const Matrix& K, const Matrix& W, const Matrix& Z,
                const Matrix& Y1, double mu) {
  check_square_match(K, W, Z, Y1);
  if (!(mu > 0.0)) throw DataError("mu must be positive");
  Matrix m(K.rows(), K.cols());
  m.noalias() = K * W;
  Matrix rhs = mu * Z + Y1;
  rhs.noalias() += m * K.transpose();
  return solve_shifted_gram(m, rhs, mu);
}

Matrix update_W(const Matrix& K, const Matrix& J, const Matrix& Z,
                const Matrix& Y2, double mu) {
  check_square_match(K, J, Z, Y2);
  if (!(mu > 0.0)) throw DataError("mu must be positive");
  Matrix m(K.rows(), K.cols());
  m.noalias() = K.transpose() * J;
  Matrix rhs = mu * Z + Y2;
  rhs.noalias() += m * K;
  return solve_shifted_gram(m, rhs, mu);
}

Matrix prox_nuclear(const Matrix& H, double tau) {
  if (!H.allFinite()) throw DataError("prox_nuclear needs a finite matrix");
  if (tau < 0.0) throw DataError("prox_nuclear needs tau >= 0");
  Eigen::BDCSVD<Matrix> svd(H, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success) throw NumericalError("SVD did not converge");
  Vector shrunk = (svd.singularValues().array() - tau).max(0.0);
  return svd.matrixU() * shrunk.asDiagonal() * svd.matrixV().transpose();
}

Matrix prox_l1(const Matrix& H, double tau) {
  if (!H.allFinite()) throw DataError("prox_l1 needs a finite matrix");
  if (tau < 0.0) throw DataError("prox_l1 needs tau >= 0");
  return H.unaryExpr([tau](double h) {
    const double mag = std::abs(h) - tau;
    if (mag <= 0.0) return 0.0;
    return h > 0.0 ? mag : -mag;
  });
}

double objective(const Matrix& K, const Matrix& Z, double gamma, Regularizer reg) {
  Matrix kz(K.rows(), K.cols());
  kz.noalias() = K * Z;
  Matrix recon(K.rows(), K.cols());
  recon.noalias() = Z.transpose() * kz;
  const double fit = 0.5 * (K - recon).squaredNorm();
  double penalty = 0.0;
  if (reg == Regularizer::LowRank) {
    Eigen::BDCSVD<Matrix> svd(Z);  // singular values only
    penalty = svd.singularValues().sum();
  } else {
    penalty = Z.cwiseAbs().sum();
  }
  return fit + gamma * penalty;
}

SlkeResult slke_fit(const Matrix& K, const SolverConfig& cfg) {
  const Eigen::Index n = K.rows();
  if (K.cols() != n) throw DataError("kernel matrix must be square");
  if (n < 1) throw DataError("kernel matrix is empty");
  if (!K.allFinite()) throw DataError("kernel matrix has non-finite entries");
  if ((K - K.transpose()).cwiseAbs().maxCoeff() > 1e-8)
    throw DataError("kernel matrix is not symmetric to 1e-8");
  if (!(cfg.gamma > 0.0)) throw DataError("gamma must be positive");
  if (!(cfg.mu > 0.0)) throw DataError("mu must be positive");
  if (!(cfg.tol > 0.0)) throw DataError("tol must be positive");
  if (cfg.max_iters < 1) throw DataError("max_iters must be at least 1");

  SlkeResult result;
  std::mt19937_64 rng(cfg.seed);
  Matrix w(n, n), z(n, n);
  for (Eigen::Index c = 0; c < n; ++c)  // column-major fill, W before Z
    for (Eigen::Index r = 0; r < n; ++r) w(r, c) = uniform01(rng);
  for (Eigen::Index c = 0; c < n; ++c)
    for (Eigen::Index r = 0; r < n; ++r) z(r, c) = uniform01(rng);
  Matrix y1 = Matrix::Zero(n, n);
  Matrix y2 = Matrix::Zero(n, n);
  const double tau = cfg.gamma / (2.0 * cfg.mu);

  auto run = [&] {
    for (int iter = 1; iter <= cfg.max_iters; ++iter) {
      Matrix j = update_J(K, w, z, y1, cfg.mu);
      w = update_W(K, j, z, y2, cfg.mu);

      const Matrix h = (j + w - (y1 + y2) / cfg.mu) / 2.0;
      z = cfg.regularizer == Regularizer::LowRank ? prox_nuclear(h, tau)
                                                  : prox_l1(h, tau);
      if (cfg.nonneg_projection) z = z.cwiseMax(0.0);

      y1 += cfg.mu * (z - j);
      y2 += cfg.mu * (z - w);

      if (!j.allFinite() || !w.allFinite() || !z.allFinite() || !y1.allFinite() ||
          !y2.allFinite()) {
        throw NumericalError("non-finite iterate at iteration " + std::to_string(iter));
      }

      const double res_j = (z - j).cwiseAbs().maxCoeff();
      const double res_w = (z - w).cwiseAbs().maxCoeff();
      result.objective_history.push_back(objective(K, z, cfg.gamma, cfg.regularizer));
      result.residual_history.emplace_back(res_j, res_w);
      result.iterations = iter;
      if (std::max(res_j, res_w) <= cfg.tol) {
        result.converged = true;
        break;
      }
    }
  };

  try {
    run();
  } catch (...) {
    // Keep whatever trace exists for post-mortem plotting.
    if (!cfg.trace_path.empty()) write_trace(cfg.trace_path, result);
    throw;
  }

  result.Z = std::move(z);
  if (!cfg.trace_path.empty()) write_trace(cfg.trace_path, result);
  return result;
}

Matrix symmetrize_affinity(const Matrix& Z) {
  if (Z.rows() != Z.cols()) throw DataError("affinity source must be square");
  return ((Z.cwiseAbs() + Z.transpose().cwiseAbs()) / 2.0).eval();
}

}  // namespace slke
