#pragma once

#include <Eigen/Dense>
#include <functional>

#include "parex/algebra/polynomial.hpp"
#include "parex/algebra/weyl.hpp"
#include "parex/gaussian/kernel.hpp"

namespace parex::gaussian {

using Polyd = algebra::Polynomial<double>;
using Weyld = algebra::WeylOperator<double>;
using Payoff = std::function<double(const Eigen::VectorXd&)>;

// Polynomial in the backward variable y (the forward point x is frozen as a
// numeric parameter) multiplying a Gaussian kernel.  The representation that
// the integrated operators produce when applied to Gamma_0.
struct PolyGaussian {
  Polyd poly;
  GaussianKernel kernel;
  Eigen::VectorXd x;

  // poly(y) * Gamma_0(t,x;T,y) * exp(log_killing)
  double evaluate(const Eigen::VectorXd& y) const;
};

// Apply an x-acting operator with pure-numeric scalars to Gamma_0(t,x;T,y).
// Uses d_{x_i} Gamma_0 = (C^{-1}(y-x-m))_i Gamma_0 recursively.
PolyGaussian apply_weyl_to_kernel(const Weyld& op, const GaussianKernel& k,
                                  const Eigen::VectorXd& x);

// Same for a y-acting operator (terms y^beta D_y^alpha); used by the
// adjoint-form identities.
PolyGaussian apply_weyl_to_kernel_y(const Weyld& op, const GaussianKernel& k,
                                    const Eigen::VectorXd& x);

struct QuadratureSpec {
  enum class Kind { gauss_hermite, trapezoid, legendre_split } kind = Kind::gauss_hermite;
  int order = 60;
  // trapezoid settings (d = 1): uniform grid over [lo, hi]
  double lo = 0, hi = 0;
  int points = 0;
  // legendre_split settings (d = 1): panel breakpoints at payoff kinks; the
  // integration range is mean +/- 12 standard deviations, subdivided into
  // panels no wider than one standard deviation
  std::vector<double> splits;

  static QuadratureSpec hermite(int order) { return {Kind::gauss_hermite, order, 0, 0, 0, {}}; }
  static QuadratureSpec trapezoid(double lo, double hi, int points) {
    return {Kind::trapezoid, 0, lo, hi, points, {}};
  }
  static QuadratureSpec legendre_split(std::vector<double> splits, int order = 16) {
    return {Kind::legendre_split, order, 0, 0, 0, std::move(splits)};
  }
};

// int poly(y) payoff(y) Gamma_0(y) dy times the killing factor.
// Gauss-Hermite nodes are mapped through the Cholesky factor of the
// covariance, so the result is exact when poly * payoff is a polynomial of
// total degree < 2 * order.
double integrate_against(const PolyGaussian& pg, const Payoff& payoff,
                         const QuadratureSpec& quadrature = {});

}  // namespace parex::gaussian
