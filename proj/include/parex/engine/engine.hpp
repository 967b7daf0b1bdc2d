#pragma once

#include <Eigen/Dense>
#include <map>
#include <mutex>
#include <vector>

#include "parex/algebra/weyl.hpp"
#include "parex/basis/coefficient_field.hpp"
#include "parex/basis/schemes.hpp"
#include "parex/gaussian/poly_gaussian.hpp"

namespace parex::engine {

using algebra::MultiIndex;
using basis::CoefficientField;
using basis::ExpansionScheme;
using gaussian::GaussianKernel;
using gaussian::Payoff;
using gaussian::PolyGaussian;
using Polyd = algebra::Polynomial<double>;
using Weyld = algebra::WeylOperator<double>;

struct ExpansionPlan {
  ExpansionScheme scheme;
  int order = 1;  // N

  enum class Freezing { fixed, diagonal } freezing = Freezing::diagonal;
  enum class TimeIntegration { exact_time_homogeneous, quadrature } time_integration =
      TimeIntegration::exact_time_homogeneous;
  int time_quadrature_order = 8;  // nested Gauss-Legendre order per level
  int gh_order = 60;              // payoff quadrature order per axis
  double prune_rel = 1e-14;       // relative pruning threshold for L_n terms
};

// Substitute the (commuting-on-Gamma_0) operator vector M into the polynomial:
// sum_delta c_delta M_1^{delta_1} ... M_d^{delta_d}, factors in ascending
// coordinate order.
Weyld substitute_into_operators(const Polyd& p, const std::vector<Weyld>& M);

// G_n(t, s_j) with the exact time-monomial scalars of the time-homogeneous
// case: M_i = x_i + (s_j - t) m_i + (s_j - t) sum_k C_ik d_k.
Weyld build_G_exact(const basis::CoeffPolys& polys_n, const Eigen::VectorXd& m_rate,
                    const Eigen::MatrixXd& C_rate, int time_index);

// G_n(t, s) with numeric scalars: m(t,s), C(t,s) supplied directly.
Weyld build_G_numeric(const basis::CoeffPolys& polys_n, const Eigen::VectorXd& m_ts,
                      const Eigen::MatrixXd& C_ts);

// Adjoint-form operator acting on y:
// sum_alpha (-1)^{|alpha|} D_y^alpha a_{alpha,n}(Mbar^y) with
// Mbar^y_i = y_i - m_i + sum_k C_ik d_{y_k}.
Weyld build_G_bar_numeric(const basis::CoeffPolys& polys_n, const Eigen::VectorXd& m_ts,
                          const Eigen::MatrixXd& C_ts);

// Per-order polynomial-times-Gaussian representation of
// Gamma_bar_N(t,x;T,.) = (1 + sum L_n) Gamma_0: entry 0 is Gamma_0 itself.
struct KernelApproximation {
  std::vector<PolyGaussian> terms;  // n = 0..N

  double evaluate(const Eigen::VectorXd& y) const;
};

struct SolveResult {
  double value = 0;
  std::vector<double> per_order;  // u_0..u_N
};

class Engine {
 public:
  Engine(CoefficientField field, ExpansionPlan plan);

  const CoefficientField& field() const { return field_; }
  const ExpansionPlan& plan() const { return plan_; }

  // Kernel and integrated operators for the frozen center xbar on [t,T].
  struct Frozen {
    GaussianKernel kernel;
    std::vector<Weyld> L;  // L_1..L_N, pure-numeric scalars
  };
  Frozen build_frozen(const Eigen::VectorXd& xbar, double t, double T) const;

  // L_n(t,T) at the frozen center (exact simplex integration in the
  // time-homogeneous case, nested Gauss-Legendre otherwise).
  Weyld build_L(const Eigen::VectorXd& xbar, int n, double t, double T) const;

  GaussianKernel leading_kernel(const Eigen::VectorXd& xbar, double t, double T) const;

  KernelApproximation approximate_kernel(double t, const Eigen::VectorXd& x, double T) const;

  // Gamma_bar_N(t,x;T,y)
  double fundamental_solution(double t, const Eigen::VectorXd& x, double T,
                              const Eigen::VectorXd& y) const;

  // u_bar_N(t,x) with the per-order breakdown u_0..u_N.  A caller that knows
  // the payoff's kink locations can pass a dedicated quadrature; the default
  // is Gauss-Hermite at the plan's order.
  SolveResult solve(const Payoff& payoff, double t, const Eigen::VectorXd& x, double T,
                    const gaussian::QuadratureSpec* quadrature = nullptr) const;

  // Bootstrapped m-step value on a 1-d grid (backward Chapman-Kolmogorov
  // recursion with Gauss-Hermite steps and cubic interpolation).
  // threads: 0 = all available, 1 = serial reference path.
  std::vector<double> bootstrap_solve(const Payoff& payoff, double t,
                                      const std::vector<double>& x_grid, double T, int m,
                                      int threads = 0) const;

  // Direct space-time quadrature of the Duhamel integral for u_1; the
  // operator-algebra cross-check, independent of build_L.
  double duhamel_u1(const Payoff& payoff, double t, const Eigen::VectorXd& x, double T,
                    int time_order = 16, int space_order = 40) const;

 private:
  Eigen::VectorXd frozen_center(const Eigen::VectorXd& x) const;
  basis::CoeffPolys polys_at(const Eigen::VectorXd& xbar, int n, double t) const;
  // time integrals of the order-0 coefficients over [t,s] at center xbar
  void a0_rates(const Eigen::VectorXd& xbar, double t, Eigen::VectorXd& m_rate,
                Eigen::MatrixXd& C_rate, double& gamma_rate) const;
  void a0_integrals(const Eigen::VectorXd& xbar, double t, double s, Eigen::VectorXd& m_ts,
                    Eigen::MatrixXd& C_ts, double& gamma_ts) const;

  CoefficientField field_;
  ExpansionPlan plan_;

  // cache for grid workloads keyed by the frozen center and interval
  using FrozenKey = std::tuple<std::vector<double>, double, double>;
  mutable std::map<FrozenKey, Frozen> frozen_cache_;
  mutable std::mutex cache_mutex_;
};

}  // namespace parex::engine
