#include "slke/kernels.hpp"

#include <cmath>

#include "slke/errors.hpp"
#include "text.hpp"

namespace slke {

namespace {

double ipow(double x, int b) {
  double r = 1.0;
  for (int i = 0; i < b; ++i) r *= x;
  return r;
}

// Squared pairwise distances via the Gram identity, clamped at 0 so that
// round-off never feeds a negative into sqrt/exp.
Matrix squared_distances(const Matrix& X) {
  const Eigen::Index n = X.cols();
  Matrix gram(n, n);
  gram.noalias() = X.transpose() * X;
  Vector sq = gram.diagonal();
  Matrix d2(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i <= j; ++i) {
      const double v = std::max(0.0, sq(i) + sq(j) - 2.0 * gram(i, j));
      d2(i, j) = v;
      d2(j, i) = v;
    }
    d2(j, j) = 0.0;
  }
  return d2;
}

}  // namespace

KernelSpec KernelSpec::gaussian(double t) {
  if (!(t > 0.0)) throw DataError("gaussian kernel needs t > 0");
  KernelSpec s;
  s.kind = Kind::Gaussian;
  s.t = t;
  return s;
}

KernelSpec KernelSpec::linear() {
  KernelSpec s;
  s.kind = Kind::Linear;
  return s;
}

KernelSpec KernelSpec::polynomial(double a, int b) {
  if (b < 1) throw DataError("polynomial kernel needs degree b >= 1");
  KernelSpec s;
  s.kind = Kind::Polynomial;
  s.a = a;
  s.b = b;
  return s;
}

std::string KernelSpec::name() const {
  switch (kind) {
    case Kind::Gaussian:
      return "gaussian_t" + detail::format_double(t);
    case Kind::Linear:
      return "linear";
    case Kind::Polynomial:
      return "poly_a" + detail::format_double(a) + "_b" + std::to_string(b);
  }
  return "unknown";
}

KernelSpec KernelSpec::parse(const std::string& text) {
  auto bad = [&] { return DataError("cannot parse kernel spec '" + text + "'"); };
  if (text == "linear") return linear();
  auto split = [](const std::string& s, char d) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
      if (i == s.size() || s[i] == d) {
        parts.push_back(s.substr(start, i - start));
        start = i + 1;
      }
    }
    return parts;
  };
  if (text.rfind("gaussian", 0) == 0) {
    std::string rest;
    if (text.rfind("gaussian:", 0) == 0) rest = text.substr(9);
    else if (text.rfind("gaussian_t", 0) == 0) rest = text.substr(10);
    else throw bad();
    auto t = detail::parse_double(rest);
    if (!t) throw bad();
    return gaussian(*t);
  }
  if (text.rfind("poly", 0) == 0) {
    if (text.rfind("poly:", 0) == 0 || text.rfind("polynomial:", 0) == 0) {
      auto parts = split(text.substr(text.find(':') + 1), ':');
      if (parts.size() != 2) throw bad();
      auto a = detail::parse_double(parts[0]);
      auto b = detail::parse_double(parts[1]);
      if (!a || !b || *b != static_cast<int>(*b)) throw bad();
      return polynomial(*a, static_cast<int>(*b));
    }
    if (text.rfind("poly_a", 0) == 0) {
      auto bpos = text.rfind("_b");
      if (bpos == std::string::npos) throw bad();
      auto a = detail::parse_double(text.substr(6, bpos - 6));
      auto b = detail::parse_double(text.substr(bpos + 2));
      if (!a || !b || *b != static_cast<int>(*b)) throw bad();
      return polynomial(*a, static_cast<int>(*b));
    }
  }
  throw bad();
}

double max_pairwise_distance(const Matrix& X) {
  if (X.cols() < 2) throw DataError("need at least 2 samples for pairwise distances");
  const double d2max = squared_distances(X).maxCoeff();
  if (d2max == 0.0) throw DataError("all samples identical, max pairwise distance is 0");
  return std::sqrt(d2max);
}

Matrix build_kernel(const Matrix& X, const KernelSpec& spec) {
  const Eigen::Index n = X.cols();
  Matrix k(n, n);
  switch (spec.kind) {
    case KernelSpec::Kind::Gaussian: {
      const Matrix d2 = squared_distances(X);
      const double d2max = d2.maxCoeff();
      if (d2max == 0.0)
        throw DataError("all samples identical, gaussian kernel undefined");
      const double denom = spec.t * d2max;
      for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i <= j; ++i) {
          const double v = std::exp(-d2(i, j) / denom);
          k(i, j) = v;
          k(j, i) = v;
        }
      }
      break;
    }
    case KernelSpec::Kind::Linear: {
      Matrix gram(n, n);
      gram.noalias() = X.transpose() * X;
      for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i <= j; ++i) {
          k(i, j) = gram(i, j);
          k(j, i) = gram(i, j);
        }
      break;
    }
    case KernelSpec::Kind::Polynomial: {
      Matrix gram(n, n);
      gram.noalias() = X.transpose() * X;
      for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i <= j; ++i) {
          const double v = ipow(spec.a + gram(i, j), spec.b);
          k(i, j) = v;
          k(j, i) = v;
        }
      break;
    }
  }
  return k;
}

Matrix rescale_kernel(const Matrix& K) {
  const double maxv = K.maxCoeff();
  if (!(maxv > 0.0)) {
    throw DataError("kernel maximum " + detail::format_double(maxv) +
                    " is not positive, cannot rescale");
  }
  return (K / maxv).eval();
}

std::vector<KernelSpec> standard_grid() {
  std::vector<KernelSpec> grid;
  for (double t : {0.01, 0.05, 0.1, 1.0, 10.0, 50.0, 100.0})
    grid.push_back(KernelSpec::gaussian(t));
  grid.push_back(KernelSpec::linear());
  for (double a : {0.0, 1.0})
    for (int b : {2, 4}) grid.push_back(KernelSpec::polynomial(a, b));
  return grid;
}

}  // namespace slke
