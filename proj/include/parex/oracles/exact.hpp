#pragma once

#include <Eigen/Dense>

#include "parex/gaussian/poly_gaussian.hpp"

namespace parex::oracles {

using gaussian::Payoff;

// 1-d constant-coefficient generator a2 u'' + a1 u' + a0 u.
struct ConstantModel {
  double a2 = 0.5;
  double a1 = 0.0;
  double a0 = 0.0;
};

// Closed-form payoff catalog with the declared smoothness index k
// (k = 0 bounded measurable, k = 1 Lipschitz, k = 2 C^{1,1}).
struct PayoffSpec {
  enum class Kind { call, digital, gaussian_bump } kind = Kind::call;
  double strike = 0.0;  // call / digital
  double center = 0.0;  // gaussian_bump
  double width = 1.0;   // gaussian_bump

  int smoothness() const;
  Payoff function() const;  // 1-d callable form
};

// u(t,x) = e^{a0 (T-t)} E[phi(Y)], Y ~ N(x + a1 (T-t), 2 a2 (T-t)),
// in terms of the normal CDF/PDF.
double exact_constant_solution(const ConstantModel& model, const PayoffSpec& payoff, double t,
                               double x, double T);

double norm_pdf(double z);
double norm_cdf(double z);

}  // namespace parex::oracles
