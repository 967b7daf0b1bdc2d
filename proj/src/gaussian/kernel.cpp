#include "parex/gaussian/kernel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "parex/gaussian/quadrature.hpp"

namespace parex::gaussian {

GaussianKernel::GaussianKernel(double t, double T, Eigen::VectorXd mean_offset,
                               Eigen::MatrixXd covariance, double log_killing)
    : t_(t),
      T_(T),
      mean_offset_(std::move(mean_offset)),
      covariance_(std::move(covariance)),
      log_killing_(log_killing) {
  const auto d = mean_offset_.size();
  if (covariance_.rows() != d || covariance_.cols() != d)
    throw std::invalid_argument("GaussianKernel: covariance shape mismatch");
  if (!covariance_.isApprox(covariance_.transpose(), 1e-12))
    throw std::invalid_argument("GaussianKernel: covariance not symmetric");
  Eigen::LLT<Eigen::MatrixXd> llt(covariance_);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("GaussianKernel: covariance not positive definite");
  chol_ = llt.matrixL();
  cov_inv_ = llt.solve(Eigen::MatrixXd::Identity(d, d));
  double logdet = 0;
  for (Eigen::Index i = 0; i < d; ++i) logdet += 2.0 * std::log(chol_(i, i));
  norm_ = std::exp(-0.5 * (d * std::log(2.0 * std::numbers::pi) + logdet));
}

double GaussianKernel::density(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const {
  const Eigen::VectorXd w = y - x - mean_offset_;
  return norm_ * std::exp(-0.5 * w.dot(cov_inv_ * w));
}

double GaussianKernel::killing_factor() const { return std::exp(log_killing_); }

GaussianKernel kernel_from_a0(const A0Map& a0, std::size_t d, double t, double T,
                              int quadrature_order) {
  using algebra::MultiIndex;
  auto value = [&](const MultiIndex& m, double s) -> double {
    auto it = a0.find(m);
    return it == a0.end() ? 0.0 : it->second(s);
  };
  auto rule = gauss_legendre(quadrature_order, t, T);
  Eigen::VectorXd m = Eigen::VectorXd::Zero(d);
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(d, d);
  double logk = 0;
  for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
    const double s = rule.nodes[q], w = rule.weights[q];
    for (std::size_t i = 0; i < d; ++i) {
      m(i) += w * value(MultiIndex::unit(d, i), s);
      for (std::size_t j = 0; j < d; ++j) {
        MultiIndex a = MultiIndex::unit(d, i) + MultiIndex::unit(d, j);
        // C_ii = 2 a_{2e_i,0},  C_ij = a_{e_i+e_j,0} for i != j
        C(i, j) += w * (i == j ? 2.0 : 1.0) * value(a, s);
      }
    }
    logk += w * value(MultiIndex(d), s);
  }
  Eigen::LLT<Eigen::MatrixXd> llt(C);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("kernel_from_a0: integrated covariance not positive definite");
  return GaussianKernel(t, T, std::move(m), std::move(C), logk);
}

double heat_kernel_bound(double M_plus_eps, std::size_t d, double t, const Eigen::VectorXd& x,
                         double T, const Eigen::VectorXd& y) {
  if (M_plus_eps <= 0 || t >= T) throw std::invalid_argument("heat_kernel_bound: need M+eps > 0, t < T");
  const double var = 2.0 * M_plus_eps * (T - t);
  const double r2 = (y - x).squaredNorm();
  return std::pow(2.0 * std::numbers::pi * var, -0.5 * static_cast<double>(d)) *
         std::exp(-0.5 * r2 / var);
}

}  // namespace parex::gaussian
