#include "parex/gaussian/quadrature.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace parex::gaussian {

namespace {

// Nodes are the eigenvalues of the symmetric tridiagonal Jacobi matrix;
// weights are mu_0 times the squared first eigenvector components.
QuadratureRule golub_welsch(const Eigen::VectorXd& offdiag, double mu0) {
  const int n = static_cast<int>(offdiag.size()) + 1;
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) {
    J(i, i + 1) = offdiag(i);
    J(i + 1, i) = offdiag(i);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  QuadratureRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    r.nodes[i] = es.eigenvalues()(i);
    const double v0 = es.eigenvectors()(0, i);
    r.weights[i] = mu0 * v0 * v0;
  }
  return r;
}

std::mutex cache_mutex;

}  // namespace

QuadratureRule gauss_hermite(int order) {
  if (order < 1) throw std::invalid_argument("gauss_hermite: order must be >= 1");
  static std::map<int, QuadratureRule> cache;
  std::lock_guard<std::mutex> lock(cache_mutex);
  auto it = cache.find(order);
  if (it != cache.end()) return it->second;
  Eigen::VectorXd off(order - 1);
  for (int i = 1; i < order; ++i) off(i - 1) = std::sqrt(i / 2.0);
  auto r = golub_welsch(off, std::sqrt(std::numbers::pi));
  cache.emplace(order, r);
  return r;
}

QuadratureRule gauss_legendre(int order, double a, double b) {
  if (order < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
  static std::map<int, QuadratureRule> cache;  // reference rule on [-1, 1]
  QuadratureRule ref;
  {
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = cache.find(order);
    if (it != cache.end()) {
      ref = it->second;
    } else {
      Eigen::VectorXd off(order - 1);
      for (int i = 1; i < order; ++i) off(i - 1) = i / std::sqrt(4.0 * i * i - 1.0);
      ref = golub_welsch(off, 2.0);
      cache.emplace(order, ref);
    }
  }
  QuadratureRule r;
  r.nodes.resize(order);
  r.weights.resize(order);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (int i = 0; i < order; ++i) {
    r.nodes[i] = mid + half * ref.nodes[i];
    r.weights[i] = half * ref.weights[i];
  }
  return r;
}

}  // namespace parex::gaussian
