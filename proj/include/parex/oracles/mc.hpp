#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "parex/basis/coefficient_field.hpp"
#include "parex/gaussian/poly_gaussian.hpp"

namespace parex::oracles {

using basis::CoefficientField;
using gaussian::Payoff;

struct MCResult {
  double value = 0;
  double std_error = 0;
  std::int64_t paths = 0;
};

// Euler-Maruyama estimate of E[exp(int a_0) phi(X_T) | X_t = x] with
// diffusion sigma = chol(2 a_2).  Paths are drawn in fixed-size blocks with
// per-block RNG streams derived from the seed, and block sums are combined in
// block order, so the result is bit-identical for any thread count.
// threads: 0 = all available, 1 = serial reference path.
MCResult mc_solve(const CoefficientField& field, const Payoff& payoff, double t,
                  const Eigen::VectorXd& x, double T, std::int64_t paths, int steps,
                  std::uint64_t seed, int threads = 0);

}  // namespace parex::oracles
