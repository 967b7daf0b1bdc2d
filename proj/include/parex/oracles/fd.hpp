#pragma once

#include <Eigen/Dense>
#include <vector>

#include "parex/basis/coefficient_field.hpp"
#include "parex/gaussian/poly_gaussian.hpp"

namespace parex::oracles {

using basis::CoefficientField;
using gaussian::Payoff;

// Uniform tensor grid, d <= 2.
struct GridSpec {
  Eigen::VectorXd lo, hi;
  std::vector<int> nodes;  // per axis
  int time_steps = 200;

  // Domain mean +/- width_sigmas leading-order standard deviations around x.
  static GridSpec automatic(const CoefficientField& field, double t, double T,
                            const Eigen::VectorXd& x, int nodes_per_axis, int time_steps,
                            double width_sigmas = 10.0);
};

// Backward Crank-Nicolson solution, values stored at the initial time t.
class FDSolution {
 public:
  FDSolution(GridSpec grid, std::vector<double> values);

  const GridSpec& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }

  // cubic-spline (d=1) or bilinear (d=2) interpolation
  double value_at(const Eigen::VectorXd& x) const;

 private:
  GridSpec grid_;
  std::vector<double> values_;  // row-major over axes
};

// theta = 1/2 Crank-Nicolson with second-order central differencing of the
// generator (full sparse solve for d = 2 including the cross term) and
// second-derivative-zero (linearity) boundary rows.
FDSolution fd_solve(const CoefficientField& field, const Payoff& payoff, double t, double T,
                    const GridSpec& grid);

struct FDPointValue {
  double value = 0;           // Richardson-extrapolated
  double error_estimate = 0;  // |fine - coarse| / 3
};

// Solve at (h, dt) and (h/2, dt/2), extrapolate at the point x.
FDPointValue fd_solve_richardson(const CoefficientField& field, const Payoff& payoff, double t,
                                 double T, const GridSpec& grid, const Eigen::VectorXd& x);

// Fundamental-solution oracle: delta_y mollified by a Gaussian of width two
// grid cells, with the mollification bias corrected through the closed-form
// constant-coefficient (frozen at y) comparison.
double fd_density(const CoefficientField& field, double t, const Eigen::VectorXd& x, double T,
                  const Eigen::VectorXd& y, const GridSpec& grid);

// Density at (h, dt) and (h/2, dt/2), Richardson-extrapolated.
FDPointValue fd_density_richardson(const CoefficientField& field, double t,
                                   const Eigen::VectorXd& x, double T, const Eigen::VectorXd& y,
                                   const GridSpec& grid);

}  // namespace parex::oracles
