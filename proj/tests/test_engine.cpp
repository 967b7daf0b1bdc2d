#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "parex/engine/engine.hpp"
#include "parex/lab/presets.hpp"
#include "parex/oracles/exact.hpp"

using namespace parex;
using engine::Engine;
using engine::ExpansionPlan;
using basis::CoefficientField;
using basis::ExpansionScheme;
using algebra::MultiIndex;
using Polyd = algebra::Polynomial<double>;
using Weyld = algebra::WeylOperator<double>;

namespace {

Eigen::VectorXd vec1(double a) {
  Eigen::VectorXd v(1);
  v(0) = a;
  return v;
}

double term_coeff(const Weyld& op, const MultiIndex& beta, const MultiIndex& alpha) {
  auto it = op.terms().find({beta, alpha});
  if (it == op.terms().end()) return 0.0;
  return it->second.numeric_value();
}

ExpansionPlan taylor_plan(const Eigen::VectorXd& xbar, int N) {
  ExpansionPlan plan;
  plan.scheme = ExpansionScheme::taylor(xbar);
  plan.order = N;
  plan.freezing = ExpansionPlan::Freezing::diagonal;
  return plan;
}

// 1-d field a2(x) = b0 + b1 x, a1(x) = mu, constant drift
CoefficientField linear_a2_field(double b0, double b1, double mu) {
  CoefficientField f(1, 6);
  f.set(
      MultiIndex{2},
      [b0, b1](double, const Eigen::VectorXd& x) { return b0 + b1 * x(0); },
      [b0, b1](double, const Eigen::VectorXd& x, const MultiIndex& b) {
        return b[0] == 0 ? b0 + b1 * x(0) : (b[0] == 1 ? b1 : 0.0);
      });
  f.set(MultiIndex{1}, [mu](double, const Eigen::VectorXd&) { return mu; },
        [mu](double, const Eigen::VectorXd&, const MultiIndex& b) { return b[0] == 0 ? mu : 0.0; });
  f.declare_ellipticity(4 * (b0 + 1), Eigen::VectorXd::Constant(1, -0.5),
                        Eigen::VectorXd::Constant(1, 0.5));
  return f;
}

}  // namespace

TEST_CASE("first-order operator has the expected three terms") {
  // polys_1: a_{2,1}(x) = b1 * x around xbar = 0; numeric scalars m, C.
  // a_{2,1}(M) D^2 with M = x + m + C d  expands to
  //   b1 x D^2 + b1 m D^2 + b1 C D^3.
  const double b1 = 0.4, m = 0.07, C = 0.9;
  basis::CoeffPolys polys;
  polys.emplace(MultiIndex{2}, Polyd::monomial(MultiIndex{1}, b1));
  const auto G = engine::build_G_numeric(polys, vec1(m), Eigen::MatrixXd::Constant(1, 1, C));

  CHECK(term_coeff(G, MultiIndex{1}, MultiIndex{2}) == doctest::Approx(b1).epsilon(1e-14));
  CHECK(term_coeff(G, MultiIndex{0}, MultiIndex{2}) == doctest::Approx(b1 * m).epsilon(1e-14));
  CHECK(term_coeff(G, MultiIndex{0}, MultiIndex{3}) == doctest::Approx(b1 * C).epsilon(1e-14));
  CHECK(G.terms().size() == 3);
}

TEST_CASE("substituting a polynomial into the dilation operators multiplies the kernel") {
  // p(M) Gamma_0 = p(y) Gamma_0 for any polynomial p
  Eigen::MatrixXd C(1, 1);
  C << 0.6;
  const auto mvec = vec1(0.15);
  gaussian::GaussianKernel k(0, 1, mvec, C, 0.0);
  const auto x = vec1(0.2);

  Weyld M(1);
  M.add_term(MultiIndex{1}, MultiIndex{0}, algebra::TimePoly<double>(1.0));
  M.add_term(MultiIndex{0}, MultiIndex{0}, algebra::TimePoly<double>(mvec(0)));
  M.add_term(MultiIndex{0}, MultiIndex{1}, algebra::TimePoly<double>(C(0, 0)));

  Polyd p(1);
  p.add_term(MultiIndex{0}, 0.3);
  p.add_term(MultiIndex{1}, -1.2);
  p.add_term(MultiIndex{3}, 0.8);
  const auto op = engine::substitute_into_operators(p, {M});
  const auto pg = apply_weyl_to_kernel(op, k, x);
  for (double yv : {-0.5, 0.1, 0.9}) {
    const auto y = vec1(yv);
    const double expect =
        (0.3 - 1.2 * yv + 0.8 * yv * yv * yv) * k.density(x, y);
    CHECK(pg.evaluate(y) == doctest::Approx(expect).epsilon(1e-11));
  }
}

TEST_CASE("x-form and adjoint-form operators agree on the kernel") {
  // The x-side operator carries the accumulated (m, C) of the front interval
  // and the adjoint y-side operator those of the back interval; the kernel
  // spans the union of the two.
  const double b1 = 0.4;
  basis::CoeffPolys polys;
  polys.emplace(MultiIndex{2}, Polyd::monomial(MultiIndex{1}, b1));
  polys.emplace(MultiIndex{1}, Polyd::monomial(MultiIndex{1}, -0.25));

  const Eigen::MatrixXd C1 = Eigen::MatrixXd::Constant(1, 1, 0.45);
  const Eigen::MatrixXd C2 = Eigen::MatrixXd::Constant(1, 1, 0.3);
  const auto m1 = vec1(0.1);
  const auto m2 = vec1(-0.05);
  gaussian::GaussianKernel k(0, 1, m1 + m2, C1 + C2, 0.0);
  const auto x = vec1(0.3);

  const auto G = engine::build_G_numeric(polys, m1, C1);
  const auto Gbar = engine::build_G_bar_numeric(polys, m2, C2);
  const auto lhs = apply_weyl_to_kernel(G, k, x);
  const auto rhs = apply_weyl_to_kernel_y(Gbar, k, x);
  for (double yv : {-0.6, 0.0, 0.4, 1.1}) {
    const auto y = vec1(yv);
    CHECK(lhs.evaluate(y) == doctest::Approx(rhs.evaluate(y)).epsilon(1e-8));
  }
}

TEST_CASE("front and back dilation operators coincide on the kernel") {
  const Eigen::MatrixXd C1 = Eigen::MatrixXd::Constant(1, 1, 0.25);
  const Eigen::MatrixXd C2 = Eigen::MatrixXd::Constant(1, 1, 0.55);
  const auto m1 = vec1(0.2);
  const auto m2 = vec1(-0.1);
  gaussian::GaussianKernel k(0, 1, m1 + m2, C1 + C2, 0.0);
  const auto x = vec1(-0.15);

  Weyld Mx(1);  // x + m1 + C1 d_x
  Mx.add_term(MultiIndex{1}, MultiIndex{0}, algebra::TimePoly<double>(1.0));
  Mx.add_term(MultiIndex{0}, MultiIndex{0}, algebra::TimePoly<double>(m1(0)));
  Mx.add_term(MultiIndex{0}, MultiIndex{1}, algebra::TimePoly<double>(C1(0, 0)));
  Weyld My(1);  // y - m2 + C2 d_y
  My.add_term(MultiIndex{1}, MultiIndex{0}, algebra::TimePoly<double>(1.0));
  My.add_term(MultiIndex{0}, MultiIndex{0}, algebra::TimePoly<double>(-m2(0)));
  My.add_term(MultiIndex{0}, MultiIndex{1}, algebra::TimePoly<double>(C2(0, 0)));

  const auto lhs = apply_weyl_to_kernel(Mx, k, x);
  const auto rhs = apply_weyl_to_kernel_y(My, k, x);
  for (double yv : {-0.7, 0.0, 0.5}) {
    const auto y = vec1(yv);
    CHECK(lhs.evaluate(y) == doctest::Approx(rhs.evaluate(y)).epsilon(1e-12));
  }
}

TEST_CASE("order zero reproduces the leading Gaussian kernel") {
  auto field = linear_a2_field(0.3, 0.2, -0.05);
  Engine eng(field, taylor_plan(vec1(0.1), 2));
  const auto x = vec1(0.1);
  const auto approx = eng.approximate_kernel(0, x, 0.5);
  REQUIRE(approx.terms.size() == 3);

  const auto k0 = eng.leading_kernel(x, 0, 0.5);
  for (double yv : {-0.3, 0.1, 0.6}) {
    const auto y = vec1(yv);
    CHECK(approx.terms[0].evaluate(y) == doctest::Approx(k0.density(x, y)).epsilon(1e-13));
  }
}

TEST_CASE("every correction term carries zero mass without killing") {
  auto field = linear_a2_field(0.3, 0.2, -0.05);
  Engine eng(field, taylor_plan(vec1(0.1), 3));
  const auto approx = eng.approximate_kernel(0, vec1(0.1), 0.75);
  const auto one = [](const Eigen::VectorXd&) { return 1.0; };
  CHECK(integrate_against(approx.terms[0], one) == doctest::Approx(1.0).epsilon(1e-12));
  for (std::size_t n = 1; n < approx.terms.size(); ++n)
    CHECK(integrate_against(approx.terms[n], one) == doctest::Approx(0.0).epsilon(1e-11));
}

TEST_CASE("constant coefficients are exact at every order") {
  const auto preset = lab::make_preset("black_scholes");
  REQUIRE(preset.constant.has_value());
  const double K = preset.default_payoff.strike;
  const auto quad = gaussian::QuadratureSpec::legendre_split({K});
  for (int N = 0; N <= 3; ++N) {
    Engine eng(preset.field, taylor_plan(preset.x0, N));
    const auto r = eng.solve(preset.default_payoff.function(), 0, preset.x0, 1.0, &quad);
    const double exact =
        exact_constant_solution(*preset.constant, preset.default_payoff, 0, preset.x0(0), 1.0);
    CHECK(r.value == doctest::Approx(exact).epsilon(1e-11));
    for (std::size_t n = 1; n < r.per_order.size(); ++n)
      CHECK(std::abs(r.per_order[n]) < 1e-11 * std::abs(exact));
  }
}

TEST_CASE("first correction matches the direct Duhamel quadrature") {
  const auto preset = lab::make_preset("tanh_localvol");
  Engine eng(preset.field, taylor_plan(preset.x0, 1));
  const auto payoff = [](const Eigen::VectorXd& y) { return std::tanh(y(0) - 0.2); };
  for (double T : {0.25, 0.5}) {
    const auto r = eng.solve(payoff, 0, preset.x0, T);
    const double direct = eng.duhamel_u1(payoff, 0, preset.x0, T);
    REQUIRE(std::abs(direct) > 1e-6);  // non-degenerate probe
    CHECK(r.per_order[1] == doctest::Approx(direct).epsilon(1e-8));
  }
}

TEST_CASE("exact and quadrature time integration agree when both apply") {
  auto field = linear_a2_field(0.25, 0.15, 0.05);
  auto plan = taylor_plan(vec1(0.0), 2);
  Engine exact_eng(field, plan);
  plan.time_integration = ExpansionPlan::TimeIntegration::quadrature;
  plan.time_quadrature_order = 16;
  Engine quad_eng(field, plan);

  const auto payoff = [](const Eigen::VectorXd& y) { return std::tanh(y(0)); };
  const auto a = exact_eng.solve(payoff, 0, vec1(0.0), 0.6);
  const auto b = quad_eng.solve(payoff, 0, vec1(0.0), 0.6);
  for (std::size_t n = 0; n < a.per_order.size(); ++n)
    CHECK(a.per_order[n] == doctest::Approx(b.per_order[n]).epsilon(1e-10));
}

TEST_CASE("single-step bootstrap equals the direct expansion on grid nodes") {
  const auto preset = lab::make_preset("tanh_localvol");
  Engine eng(preset.field, taylor_plan(preset.x0, 1));
  const auto payoff = [](const Eigen::VectorXd& y) { return std::tanh(y(0)); };

  std::vector<double> grid;
  for (int i = 0; i <= 80; ++i) grid.push_back(-4.0 + 0.1 * i);
  const auto boot = eng.bootstrap_solve(payoff, 0, grid, 0.5, 1);
  const std::size_t mid = 40;  // x = 0
  const auto direct = eng.solve(payoff, 0, vec1(grid[mid]), 0.5);
  CHECK(boot[mid] == doctest::Approx(direct.value).epsilon(1e-10));
}

TEST_CASE("bootstrap is deterministic across thread counts") {
  const auto preset = lab::make_preset("tanh_localvol");
  Engine eng(preset.field, taylor_plan(preset.x0, 1));
  const auto payoff = [](const Eigen::VectorXd& y) { return std::tanh(y(0)); };
  std::vector<double> grid;
  for (int i = 0; i <= 120; ++i) grid.push_back(-6.0 + 0.1 * i);
  const auto serial = eng.bootstrap_solve(payoff, 0, grid, 1.0, 4, /*threads=*/1);
  const auto parallel = eng.bootstrap_solve(payoff, 0, grid, 1.0, 4, /*threads=*/0);
  REQUIRE(serial.size() == parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) CHECK(serial[i] == parallel[i]);
}

TEST_CASE("bootstrap rejects quadrature mass far outside the grid") {
  const auto preset = lab::make_preset("tanh_localvol");
  Engine eng(preset.field, taylor_plan(preset.x0, 1));
  const auto payoff = [](const Eigen::VectorXd& y) { return std::tanh(y(0)); };
  std::vector<double> tiny{-0.2, -0.1, 0.0, 0.1, 0.2};  // far too narrow for T = 1
  CHECK_THROWS_AS(eng.bootstrap_solve(payoff, 0, tiny, 1.0, 2), std::runtime_error);
}
