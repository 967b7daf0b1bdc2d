#pragma once

#include <vector>

namespace parex::gaussian {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss-Hermite rule for the weight exp(-z^2) on (-inf, inf).
// Golub-Welsch on the Jacobi matrix of the (physicists') Hermite recurrence.
QuadratureRule gauss_hermite(int order);

// Gauss-Legendre rule on [a, b].
QuadratureRule gauss_legendre(int order, double a, double b);

}  // namespace parex::gaussian
