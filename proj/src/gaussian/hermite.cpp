#include "parex/gaussian/hermite.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "parex/gaussian/quadrature.hpp"

namespace parex::gaussian {

using algebra::MultiIndex;
using Polyd = algebra::Polynomial<double>;

Polyd hermite_1d(int n) {
  if (n < 0) throw std::invalid_argument("hermite_1d: negative order");
  Polyd z = Polyd::variable(1, 0);
  Polyd prev(1, 1.0);  // He_0
  if (n == 0) return prev;
  Polyd cur = z;  // He_1
  for (int k = 1; k < n; ++k) {
    Polyd next = z * cur - prev * static_cast<double>(k);
    prev = cur;
    cur = next;
  }
  double fact = 1;
  for (int k = 2; k <= n; ++k) fact *= k;
  return cur * (1.0 / std::sqrt(fact));
}

Polyd hermite_tensor(const MultiIndex& beta, const Eigen::VectorXd& center,
                     const Eigen::MatrixXd& weight_covariance) {
  const std::size_t d = beta.dim();
  Eigen::LLT<Eigen::MatrixXd> llt(weight_covariance);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("hermite_tensor: weight covariance not positive definite");
  const Eigen::MatrixXd Linv =
      Eigen::MatrixXd(llt.matrixL()).triangularView<Eigen::Lower>().solve(
          Eigen::MatrixXd::Identity(d, d));
  // z_i(x) = (L^{-1}(x - center))_i as degree-1 polynomials in x
  std::vector<Polyd> z;
  for (std::size_t i = 0; i < d; ++i) {
    Polyd zi(d);
    double c0 = 0;
    for (std::size_t j = 0; j < d; ++j) {
      zi.add_term(MultiIndex::unit(d, j), Linv(i, j));
      c0 -= Linv(i, j) * center(j);
    }
    zi.add_term(MultiIndex(d), c0);
    z.push_back(zi);
  }
  Polyd r(d, 1.0);
  for (std::size_t i = 0; i < d; ++i) {
    Polyd h1 = hermite_1d(beta[i]);
    r = r * h1.compose({z[i]});
  }
  return r;
}

std::map<MultiIndex, double> hermite_inner_products(
    const std::function<double(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& center,
    const Eigen::MatrixXd& weight_covariance, int max_order, int quadrature_order) {
  const std::size_t d = static_cast<std::size_t>(center.size());
  if (d > 3) throw std::invalid_argument("hermite_inner_products: d <= 3 supported");
  Eigen::LLT<Eigen::MatrixXd> llt(weight_covariance);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("hermite_inner_products: weight covariance not positive definite");
  const Eigen::MatrixXd L = llt.matrixL();
  const auto rule = gauss_hermite(quadrature_order);
  const int q = quadrature_order;
  const double norm = std::pow(std::numbers::pi, -0.5 * static_cast<double>(d));

  const auto betas = algebra::multi_indices_up_to(d, max_order);
  std::vector<Polyd> hpolys;
  hpolys.reserve(betas.size());
  for (auto& b : betas) hpolys.push_back(hermite_tensor(b, center, weight_covariance));

  std::map<MultiIndex, double> out;
  for (auto& b : betas) out[b] = 0.0;
  const std::size_t total = static_cast<std::size_t>(std::pow(q, static_cast<int>(d)));
  std::vector<double> xbuf(d);
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rem = flat;
    double w = 1;
    Eigen::VectorXd z(d);
    for (std::size_t i = 0; i < d; ++i) {
      const int k = static_cast<int>(rem % q);
      rem /= q;
      z(i) = rule.nodes[k];
      w *= rule.weights[k];
    }
    const Eigen::VectorXd x = center + std::numbers::sqrt2 * (L * z);
    for (std::size_t i = 0; i < d; ++i) xbuf[i] = x(i);
    const double fv = f(x) * w * norm;
    for (std::size_t bi = 0; bi < betas.size(); ++bi)
      out[betas[bi]] += fv * hpolys[bi].evaluate(xbuf);
  }
  return out;
}

}  // namespace parex::gaussian
