#pragma once

#include <Eigen/Dense>
#include <functional>
#include <map>

#include "parex/algebra/multi_index.hpp"

namespace parex::gaussian {

// Leading-order Gaussian kernel: density with covariance C(t,T), mean
// x + m(t,T), plus the accumulated killing exponent int_t^T gamma(s) ds.
class GaussianKernel {
 public:
  GaussianKernel(double t, double T, Eigen::VectorXd mean_offset, Eigen::MatrixXd covariance,
                 double log_killing);

  std::size_t dim() const { return static_cast<std::size_t>(mean_offset_.size()); }
  double t() const { return t_; }
  double T() const { return T_; }
  const Eigen::VectorXd& mean_offset() const { return mean_offset_; }
  const Eigen::MatrixXd& covariance() const { return covariance_; }
  const Eigen::MatrixXd& covariance_inverse() const { return cov_inv_; }
  const Eigen::MatrixXd& cholesky_factor() const { return chol_; }
  double log_killing() const { return log_killing_; }

  // Gamma_0(t,x;T,y), without the killing factor.
  double density(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const;

  double killing_factor() const;

 private:
  double t_, T_;
  Eigen::VectorXd mean_offset_;
  Eigen::MatrixXd covariance_;
  Eigen::MatrixXd cov_inv_;
  Eigen::MatrixXd chol_;  // lower-triangular L with C = L L^T
  double log_killing_;
  double norm_;  // (2 pi)^{-d/2} |C|^{-1/2}
};

// Time functions of the order-0 coefficients: alpha -> a_{alpha,0}(s).
using A0Map = std::map<algebra::MultiIndex, std::function<double(double)>>;

// Build Gamma_0 from the order-0 coefficients by time integration of
// C(s), m(s), gamma(s) with Gauss-Legendre of the given order
// (exact for polynomial-in-time coefficients).
GaussianKernel kernel_from_a0(const A0Map& a0, std::size_t d, double t, double T,
                              int quadrature_order = 16);

// Isotropic heat kernel with variance 2*(M+eps)*(T-t) per axis, the bound
// kernel used for density-error normalization.
double heat_kernel_bound(double M_plus_eps, std::size_t d, double t, const Eigen::VectorXd& x,
                         double T, const Eigen::VectorXd& y);

}  // namespace parex::gaussian
