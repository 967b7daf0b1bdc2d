#include "parex/engine/engine.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "parex/algebra/compositions.hpp"
#include "parex/gaussian/quadrature.hpp"
#include "parex/util/cubic_spline.hpp"

namespace parex::engine {

using algebra::compositions;
using algebra::TimeMonomial;
using algebra::TimePoly;
using algebra::weyl_compose;
using algebra::weyl_prune;

Weyld substitute_into_operators(const Polyd& p, const std::vector<Weyld>& M) {
  const std::size_t d = M.size();
  Weyld r(d);
  for (auto& [delta, c] : p.terms()) {
    Weyld acc = Weyld::identity(d);
    for (std::size_t i = 0; i < d; ++i)
      for (int k = 0; k < delta[i]; ++k) acc = weyl_compose(acc, M[i]);
    r += acc * c;
  }
  return r;
}

namespace {

Weyld derivative_operator(std::size_t d, const MultiIndex& alpha) {
  Weyld r(d);
  r.add_term(MultiIndex(d), alpha, TimePoly<double>::one());
  return r;
}

Weyld assemble_G(const basis::CoeffPolys& polys_n, const std::vector<Weyld>& M, std::size_t d,
                 bool adjoint = false) {
  Weyld g(d);
  for (auto& [alpha, p] : polys_n) {
    if (p.is_zero()) continue;
    Weyld sub = substitute_into_operators(p, M);
    if (adjoint) {
      const double sign = alpha.order() % 2 == 0 ? 1.0 : -1.0;
      g += weyl_compose(derivative_operator(d, alpha), sub) * sign;
    } else {
      g += weyl_compose(sub, derivative_operator(d, alpha));
    }
  }
  return g;
}

}  // namespace

Weyld build_G_exact(const basis::CoeffPolys& polys_n, const Eigen::VectorXd& m_rate,
                    const Eigen::MatrixXd& C_rate, int time_index) {
  const std::size_t d = static_cast<std::size_t>(m_rate.size());
  const TimeMonomial s_minus_t{{time_index, 1}};
  std::vector<Weyld> M;
  for (std::size_t i = 0; i < d; ++i) {
    Weyld Mi = Weyld::position(d, i);
    Mi.add_term(MultiIndex(d), MultiIndex(d), TimePoly<double>(m_rate(i), s_minus_t));
    for (std::size_t k = 0; k < d; ++k)
      if (C_rate(i, k) != 0.0)
        Mi.add_term(MultiIndex(d), MultiIndex::unit(d, k), TimePoly<double>(C_rate(i, k), s_minus_t));
    M.push_back(std::move(Mi));
  }
  return assemble_G(polys_n, M, d);
}

Weyld build_G_numeric(const basis::CoeffPolys& polys_n, const Eigen::VectorXd& m_ts,
                      const Eigen::MatrixXd& C_ts) {
  const std::size_t d = static_cast<std::size_t>(m_ts.size());
  std::vector<Weyld> M;
  for (std::size_t i = 0; i < d; ++i) {
    Weyld Mi = Weyld::position(d, i);
    Mi.add_term(MultiIndex(d), MultiIndex(d), TimePoly<double>(m_ts(i)));
    for (std::size_t k = 0; k < d; ++k)
      if (C_ts(i, k) != 0.0)
        Mi.add_term(MultiIndex(d), MultiIndex::unit(d, k), TimePoly<double>(C_ts(i, k)));
    M.push_back(std::move(Mi));
  }
  return assemble_G(polys_n, M, d);
}

Weyld build_G_bar_numeric(const basis::CoeffPolys& polys_n, const Eigen::VectorXd& m_ts,
                          const Eigen::MatrixXd& C_ts) {
  const std::size_t d = static_cast<std::size_t>(m_ts.size());
  std::vector<Weyld> M;
  for (std::size_t i = 0; i < d; ++i) {
    Weyld Mi = Weyld::position(d, i);
    Mi.add_term(MultiIndex(d), MultiIndex(d), TimePoly<double>(-m_ts(i)));
    for (std::size_t k = 0; k < d; ++k)
      if (C_ts(i, k) != 0.0)
        Mi.add_term(MultiIndex(d), MultiIndex::unit(d, k), TimePoly<double>(C_ts(i, k)));
    M.push_back(std::move(Mi));
  }
  return assemble_G(polys_n, M, d, /*adjoint=*/true);
}

double KernelApproximation::evaluate(const Eigen::VectorXd& y) const {
  double v = 0;
  for (auto& pg : terms) v += pg.evaluate(y);
  return v;
}

Engine::Engine(CoefficientField field, ExpansionPlan plan)
    : field_(std::move(field)), plan_(std::move(plan)) {
  if (plan_.order < 0) throw std::invalid_argument("Engine: order must be >= 0");
  if (plan_.freezing == ExpansionPlan::Freezing::diagonal &&
      !plan_.scheme.accepts_arbitrary_center())
    throw std::invalid_argument("Engine: diagonal freezing needs a scheme with a movable center");
  if (plan_.time_integration == ExpansionPlan::TimeIntegration::exact_time_homogeneous &&
      !field_.time_homogeneous())
    throw std::invalid_argument(
        "Engine: exact time integration requires time-homogeneous coefficients; "
        "select quadrature mode");
}

Eigen::VectorXd Engine::frozen_center(const Eigen::VectorXd& x) const {
  if (plan_.freezing == ExpansionPlan::Freezing::diagonal) return x;
  return plan_.scheme.xbar;
}

basis::CoeffPolys Engine::polys_at(const Eigen::VectorXd& xbar, int n, double t) const {
  const Eigen::VectorXd* center =
      plan_.scheme.accepts_arbitrary_center() ? &xbar : nullptr;
  return basis::basis_polynomials(field_, plan_.scheme, n, t, center);
}

void Engine::a0_rates(const Eigen::VectorXd& xbar, double t, Eigen::VectorXd& m_rate,
                      Eigen::MatrixXd& C_rate, double& gamma_rate) const {
  const std::size_t d = field_.dim();
  auto a0 = polys_at(xbar, 0, t);
  const std::vector<double> origin(d, 0.0);
  auto val = [&](const MultiIndex& a) -> double {
    auto it = a0.find(a);
    return it == a0.end() ? 0.0 : it->second.evaluate(origin);
  };
  m_rate.resize(d);
  C_rate.resize(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    m_rate(i) = val(MultiIndex::unit(d, i));
    for (std::size_t j = 0; j < d; ++j)
      C_rate(i, j) =
          (i == j ? 2.0 : 1.0) * val(MultiIndex::unit(d, i) + MultiIndex::unit(d, j));
  }
  gamma_rate = val(MultiIndex(d));
}

void Engine::a0_integrals(const Eigen::VectorXd& xbar, double t, double s, Eigen::VectorXd& m_ts,
                          Eigen::MatrixXd& C_ts, double& gamma_ts) const {
  const std::size_t d = field_.dim();
  m_ts = Eigen::VectorXd::Zero(d);
  C_ts = Eigen::MatrixXd::Zero(d, d);
  gamma_ts = 0;
  if (field_.time_homogeneous()) {
    Eigen::VectorXd mr;
    Eigen::MatrixXd Cr;
    double gr;
    a0_rates(xbar, t, mr, Cr, gr);
    m_ts = (s - t) * mr;
    C_ts = (s - t) * Cr;
    gamma_ts = (s - t) * gr;
    return;
  }
  auto rule = gaussian::gauss_legendre(std::max(plan_.time_quadrature_order, 8), t, s);
  for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
    Eigen::VectorXd mr;
    Eigen::MatrixXd Cr;
    double gr;
    a0_rates(xbar, rule.nodes[q], mr, Cr, gr);
    m_ts += rule.weights[q] * mr;
    C_ts += rule.weights[q] * Cr;
    gamma_ts += rule.weights[q] * gr;
  }
}

GaussianKernel Engine::leading_kernel(const Eigen::VectorXd& xbar, double t, double T) const {
  Eigen::VectorXd m;
  Eigen::MatrixXd C;
  double g;
  a0_integrals(xbar, t, T, m, C, g);
  return GaussianKernel(t, T, std::move(m), std::move(C), g);
}

Weyld Engine::build_L(const Eigen::VectorXd& xbar, int n, double t, double T) const {
  if (n < 1) throw std::invalid_argument("build_L: n must be >= 1");
  const std::size_t d = field_.dim();
  Weyld L(d);

  if (plan_.time_integration == ExpansionPlan::TimeIntegration::exact_time_homogeneous) {
    Eigen::VectorXd m_rate;
    Eigen::MatrixXd C_rate;
    double gamma_rate;
    a0_rates(xbar, t, m_rate, C_rate, gamma_rate);
    std::vector<basis::CoeffPolys> polys(n + 1);
    for (int k = 1; k <= n; ++k) polys[k] = polys_at(xbar, k, t);
    for (int h = 1; h <= n; ++h) {
      for (auto& comp : compositions(n, h)) {
        Weyld acc = build_G_exact(polys[comp[0]], m_rate, C_rate, 1);
        for (int j = 1; j < h; ++j)
          acc = weyl_compose(acc, build_G_exact(polys[comp[j]], m_rate, C_rate, j + 1));
        L += simplex_integrate(acc, h, t, T);
      }
    }
    return weyl_prune(L, plan_.prune_rel);
  }

  // quadrature mode: nested Gauss-Legendre over the ordered simplex
  const int q = plan_.time_quadrature_order;
  auto G_at = [&](int order, double s) -> Weyld {
    Eigen::VectorXd m_ts;
    Eigen::MatrixXd C_ts;
    double g_ts;
    a0_integrals(xbar, t, s, m_ts, C_ts, g_ts);
    return build_G_numeric(polys_at(xbar, order, s), m_ts, C_ts);
  };
  for (int h = 1; h <= n; ++h) {
    for (auto& comp : compositions(n, h)) {
      std::function<Weyld(int, double)> rec = [&](int level, double lower) -> Weyld {
        auto rule = gaussian::gauss_legendre(q, lower, T);
        Weyld sum(d);
        for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
          Weyld g = G_at(comp[level - 1], rule.nodes[k]);
          if (level < h) g = weyl_compose(g, rec(level + 1, rule.nodes[k]));
          sum += g * rule.weights[k];
        }
        return sum;
      };
      L += rec(1, t);
    }
  }
  return weyl_prune(L, plan_.prune_rel);
}

Engine::Frozen Engine::build_frozen(const Eigen::VectorXd& xbar, double t, double T) const {
  Frozen f{leading_kernel(xbar, t, T), {}};
  f.L.reserve(plan_.order);
  for (int n = 1; n <= plan_.order; ++n) f.L.push_back(build_L(xbar, n, t, T));
  return f;
}

KernelApproximation Engine::approximate_kernel(double t, const Eigen::VectorXd& x,
                                               double T) const {
  if (t >= T) throw std::invalid_argument("approximate_kernel: need t < T");
  const Eigen::VectorXd xbar = frozen_center(x);

  FrozenKey key{std::vector<double>(xbar.data(), xbar.data() + xbar.size()), t, T};
  const Frozen* fp = nullptr;
  {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    auto it = frozen_cache_.find(key);
    if (it != frozen_cache_.end()) fp = &it->second;
  }
  if (!fp) {
    Frozen local = build_frozen(xbar, t, T);
    std::lock_guard<std::mutex> lock(cache_mutex_);
    fp = &frozen_cache_.emplace(std::move(key), std::move(local)).first->second;
  }

  KernelApproximation ka;
  ka.terms.push_back(PolyGaussian{Polyd(field_.dim(), 1.0), fp->kernel, x});
  for (auto& Ln : fp->L) ka.terms.push_back(gaussian::apply_weyl_to_kernel(Ln, fp->kernel, x));
  return ka;
}

double Engine::fundamental_solution(double t, const Eigen::VectorXd& x, double T,
                                    const Eigen::VectorXd& y) const {
  return approximate_kernel(t, x, T).evaluate(y);
}

SolveResult Engine::solve(const Payoff& payoff, double t, const Eigen::VectorXd& x, double T,
                          const gaussian::QuadratureSpec* quadrature) const {
  if (t >= T) throw std::invalid_argument("solve: need t < T");
  auto ka = approximate_kernel(t, x, T);
  SolveResult r;
  const auto spec =
      quadrature ? *quadrature : gaussian::QuadratureSpec::hermite(plan_.gh_order);
  for (auto& pg : ka.terms) {
    const double un = gaussian::integrate_against(pg, payoff, spec);
    r.per_order.push_back(un);
    r.value += un;
  }
  return r;
}

std::vector<double> Engine::bootstrap_solve(const Payoff& payoff, double t,
                                            const std::vector<double>& x_grid, double T, int m,
                                            int threads) const {
  if (field_.dim() != 1)
    throw std::invalid_argument("bootstrap_solve: implemented for d = 1");
  if (m < 1) throw std::invalid_argument("bootstrap_solve: m must be >= 1");
  if (t >= T) throw std::invalid_argument("bootstrap_solve: need t < T");
  if (x_grid.size() < 4) throw std::invalid_argument("bootstrap_solve: grid too small");

  const std::size_t n = x_grid.size();
  const double delta = (T - t) / m;
  const double grid_lo = x_grid.front(), grid_hi = x_grid.back();

  int nt = 1;
#ifdef _OPENMP
  nt = threads == 0 ? omp_get_max_threads() : std::max(1, threads);
#else
  (void)threads;
#endif

  // Per-node kernels and integrated operators.  Time-homogeneous models use
  // the same data for every step; otherwise rebuilt per step below.
  std::vector<KernelApproximation> node_ka;
  auto build_nodes = [&](double t_lo) {
    node_ka.assign(n, KernelApproximation{});
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(nt)
#endif
    for (std::ptrdiff_t j = 0; j < static_cast<std::ptrdiff_t>(n); ++j) {
      Eigen::VectorXd xj(1);
      xj(0) = x_grid[static_cast<std::size_t>(j)];
      node_ka[static_cast<std::size_t>(j)] = approximate_kernel(t_lo, xj, t_lo + delta);
    }
  };
  build_nodes(t);

  const auto rule = gaussian::gauss_hermite(plan_.gh_order);
  const double norm = 1.0 / std::sqrt(std::numbers::pi);

  std::vector<double> v(n, 0.0);
  for (int step = m; step >= 1; --step) {
    const double t_lo = t + (step - 1) * delta;
    if (!field_.time_homogeneous()) build_nodes(t_lo);
    std::shared_ptr<util::CubicSpline> spline;
    if (step < m) spline = std::make_shared<util::CubicSpline>(x_grid, v);

    std::vector<double> next(n, 0.0);
    // Nodes slightly beyond the grid use the spline's linear extrapolation
    // (the linearity boundary policy); a large excursion means the grid is
    // genuinely too narrow for the step size.
    const double margin = 0.2 * (grid_hi - grid_lo);
    bool narrow = false;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(nt)
#endif
    for (std::ptrdiff_t j = 0; j < static_cast<std::ptrdiff_t>(n); ++j) {
      const auto& ka = node_ka[static_cast<std::size_t>(j)];
      const auto& kernel = ka.terms[0].kernel;
      const double mean = ka.terms[0].x(0) + kernel.mean_offset()(0);
      const double sig = std::sqrt(kernel.covariance()(0, 0));
      double sum = 0;
      for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
        const double y = mean + std::numbers::sqrt2 * sig * rule.nodes[k];
        if (step < m && (y < grid_lo - margin || y > grid_hi + margin) &&
            rule.weights[k] > 1e-12)
          narrow = true;
        double val;
        if (step == m) {
          Eigen::VectorXd yv(1);
          yv(0) = y;
          val = payoff(yv);
        } else {
          val = (*spline)(y);
        }
        double polysum = 0;
        for (auto& pg : ka.terms) polysum += pg.poly.evaluate({y});
        sum += rule.weights[k] * polysum * val;
      }
      next[static_cast<std::size_t>(j)] = sum * norm * kernel.killing_factor();
    }
    if (narrow)
      throw std::runtime_error(
          "bootstrap_solve: quadrature mass extends beyond the spatial grid; widen the grid");
    v = std::move(next);
  }
  return v;
}

double Engine::duhamel_u1(const Payoff& payoff, double t, const Eigen::VectorXd& x, double T,
                          int time_order, int space_order) const {
  if (t >= T) throw std::invalid_argument("duhamel_u1: need t < T");
  if (field_.dim() > 2) throw std::invalid_argument("duhamel_u1: oracle-grade cost, d <= 2 only");
  const std::size_t d = field_.dim();
  const Eigen::VectorXd xbar = frozen_center(x);
  const auto gh = gaussian::gauss_hermite(space_order);
  const double norm = std::pow(std::numbers::pi, -0.5 * static_cast<double>(d));
  const auto payoff_spec = gaussian::QuadratureSpec::hermite(plan_.gh_order);

  auto rule_t = gaussian::gauss_legendre(time_order, t, T);
  double u1 = 0;
  for (std::size_t qs = 0; qs < rule_t.nodes.size(); ++qs) {
    const double s = rule_t.nodes[qs];
    const GaussianKernel kA = leading_kernel(xbar, t, s);
    const GaussianKernel kB = leading_kernel(xbar, s, T);
    const auto polys1 = polys_at(xbar, 1, s);
    const Eigen::VectorXd meanA = x + kA.mean_offset();
    const Eigen::MatrixXd& LA = kA.cholesky_factor();

    const std::size_t total = static_cast<std::size_t>(std::pow(space_order, static_cast<int>(d)));
    double inner = 0;
    for (std::size_t flat = 0; flat < total; ++flat) {
      std::size_t rem = flat;
      double w = 1;
      Eigen::VectorXd z(d);
      for (std::size_t i = 0; i < d; ++i) {
        const int k = static_cast<int>(rem % space_order);
        rem /= space_order;
        z(i) = gh.nodes[k];
        w *= gh.weights[k];
      }
      const Eigen::VectorXd xi = meanA + std::numbers::sqrt2 * (LA * z);
      std::vector<double> xibuf(xi.data(), xi.data() + xi.size());
      double a1u0 = 0;
      for (auto& [alpha, p] : polys1) {
        if (p.is_zero()) continue;
        const double coeff = p.evaluate(xibuf);
        if (coeff == 0.0) continue;
        Weyld da(d);
        da.add_term(MultiIndex(d), alpha, TimePoly<double>::one());
        const auto pg = gaussian::apply_weyl_to_kernel(da, kB, xi);
        a1u0 += coeff * gaussian::integrate_against(pg, payoff, payoff_spec);
      }
      inner += w * a1u0;
    }
    u1 += rule_t.weights[qs] * inner * norm * kA.killing_factor();
  }
  return u1;
}

}  // namespace parex::engine
