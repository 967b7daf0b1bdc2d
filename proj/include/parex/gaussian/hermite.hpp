#pragma once

#include <Eigen/Dense>
#include <functional>
#include <map>

#include "parex/algebra/multi_index.hpp"
#include "parex/algebra/polynomial.hpp"

namespace parex::gaussian {

// n-th probabilists' Hermite polynomial, normalized so that
// <H_m, H_n>_{N(0,1)} = delta_{mn}  (He_n / sqrt(n!)).
algebra::Polynomial<double> hermite_1d(int n);

// Tensor polynomial H_beta(L^{-1}(x - center)) as a polynomial in x, where
// L is the Cholesky factor of the weight covariance.  These are orthonormal
// under the Gaussian weight N(center, weight_covariance).
algebra::Polynomial<double> hermite_tensor(const algebra::MultiIndex& beta,
                                           const Eigen::VectorXd& center,
                                           const Eigen::MatrixXd& weight_covariance);

// Coefficients c_beta = <H_beta, f>_Gamma for |beta| <= max_order, by
// tensorized Gauss-Hermite quadrature.
std::map<algebra::MultiIndex, double> hermite_inner_products(
    const std::function<double(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& center,
    const Eigen::MatrixXd& weight_covariance, int max_order, int quadrature_order = 40);

}  // namespace parex::gaussian
