#pragma once

#include <Eigen/Dense>
#include <functional>
#include <map>
#include <vector>

#include "parex/algebra/polynomial.hpp"
#include "parex/basis/coefficient_field.hpp"

namespace parex::basis {

using Polyd = algebra::Polynomial<double>;
using CoeffPolys = std::map<MultiIndex, Polyd>;

// One of the four polynomial expansion families.  The leading term
// a_{alpha,0}(t,.) is constant in space for every kind.
struct ExpansionScheme {
  enum class Kind { taylor, enhanced_taylor, time_taylor, hermite };
  Kind kind = Kind::taylor;
  Eigen::VectorXd xbar;                              // center (all but time_taylor)
  std::vector<int> M;                                // enhanced grouping M_1..M_N
  std::function<Eigen::VectorXd(double)> xbar_path;  // time_taylor
  Eigen::MatrixXd weight;                            // hermite weight covariance
  int hermite_quadrature_order = 40;

  static ExpansionScheme taylor(Eigen::VectorXd xbar);
  static ExpansionScheme enhanced_taylor(Eigen::VectorXd xbar, std::vector<int> M);
  static ExpansionScheme time_taylor(std::function<Eigen::VectorXd(double)> path);
  static ExpansionScheme hermite(Eigen::VectorXd xbar, Eigen::MatrixXd weight);

  bool accepts_arbitrary_center() const { return kind != Kind::time_taylor; }
};

// a_{alpha,n}(t,x) = sum_{|beta|=n} D^beta a_alpha(t,xbar)/beta! (x-xbar)^beta
CoeffPolys expand_taylor(const CoefficientField& field, const Eigen::VectorXd& xbar, int n,
                         double t);

// n-th group collects Taylor orders 1+M_{n-1} .. M_n (M_0 = 0, M non-decreasing)
CoeffPolys expand_enhanced(const CoefficientField& field, const Eigen::VectorXd& xbar,
                           const std::vector<int>& M, int n, double t);

// Taylor around the moving center xbar(t)
CoeffPolys expand_time_taylor(const CoefficientField& field,
                              const std::function<Eigen::VectorXd(double)>& xbar_path, int n,
                              double t);

// order-n Hermite projection under the Gaussian weight N(xbar, weight)
CoeffPolys expand_hermite(const CoefficientField& field, const Eigen::VectorXd& xbar,
                          const Eigen::MatrixXd& weight, int n, double t,
                          int quadrature_order = 40);

// Dispatch on the scheme kind; `center` overrides the stored center where the
// kind allows it (the diagonal-freezing path).
CoeffPolys basis_polynomials(const CoefficientField& field, const ExpansionScheme& scheme, int n,
                             double t, const Eigen::VectorXd* center = nullptr);

// One Picard pass for the mean path of Example-style moving centers:
// xbar(s) = x0 + int_{t0}^s m(r, x0) dr with the drift frozen at x0.
std::function<Eigen::VectorXd(double)> frozen_drift_mean_path(const CoefficientField& field,
                                                              Eigen::VectorXd x0, double t0,
                                                              int quadrature_order = 16);

}  // namespace parex::basis
