#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "parex/basis/coefficient_field.hpp"
#include "parex/basis/jet.hpp"
#include "parex/basis/schemes.hpp"

using namespace parex;
using basis::CoefficientField;
using basis::ExpansionScheme;
using basis::Jet;
using algebra::MultiIndex;
using Polyd = algebra::Polynomial<double>;

namespace {

double eval(const Polyd& p, const Eigen::VectorXd& x) {
  std::vector<double> v(x.data(), x.data() + x.size());
  return p.evaluate(v);
}

bool poly_close(const Polyd& a, const Polyd& b, double tol) {
  auto diff = a - b;
  for (const auto& [m, c] : diff.terms())
    if (std::abs(c) > tol) return false;
  return true;
}

// a2(x) = 1 + 2x + 3x^2, a1(x) = -x, a0 = 0.5: polynomial coefficients with
// exact derivatives, so every expansion family should be exactly reproducible.
CoefficientField poly_field() {
  CoefficientField f(1, 6);
  f.set(
      MultiIndex{2},
      [](double, const Eigen::VectorXd& x) { return 1 + 2 * x(0) + 3 * x(0) * x(0); },
      [](double, const Eigen::VectorXd& x, const MultiIndex& b) {
        switch (b[0]) {
          case 0: return 1 + 2 * x(0) + 3 * x(0) * x(0);
          case 1: return 2 + 6 * x(0);
          case 2: return 6.0;
          default: return 0.0;
        }
      });
  f.set(
      MultiIndex{1}, [](double, const Eigen::VectorXd& x) { return -x(0); },
      [](double, const Eigen::VectorXd& x, const MultiIndex& b) {
        return b[0] == 0 ? -x(0) : (b[0] == 1 ? -1.0 : 0.0);
      });
  f.set(MultiIndex{0}, [](double, const Eigen::VectorXd&) { return 0.5; },
        [](double, const Eigen::VectorXd&, const MultiIndex& b) { return b[0] == 0 ? 0.5 : 0.0; });
  f.declare_ellipticity(10, Eigen::VectorXd::Constant(1, -0.5), Eigen::VectorXd::Constant(1, 0.5));
  return f;
}

}  // namespace

TEST_CASE("jet arithmetic reproduces analytic derivatives") {
  const std::size_t len = 7;

  auto t = tanh(Jet::variable(0.0, len));
  CHECK(t.derivative(0) == doctest::Approx(0.0));
  CHECK(t.derivative(1) == doctest::Approx(1.0));
  CHECK(t.derivative(2) == doctest::Approx(0.0));
  CHECK(t.derivative(3) == doctest::Approx(-2.0));
  CHECK(t.derivative(5) == doctest::Approx(16.0));

  auto e = exp(Jet::variable(0.3, len));
  for (std::size_t k = 0; k < len; ++k)
    CHECK(e.derivative(k) == doctest::Approx(std::exp(0.3)).epsilon(1e-13));

  // sqrt(1 + x) at 0: 1, 1/2, -1/4, 3/8
  auto s = sqrt(Jet::variable(0.0, len) + 1.0);
  CHECK(s.derivative(0) == doctest::Approx(1.0));
  CHECK(s.derivative(1) == doctest::Approx(0.5));
  CHECK(s.derivative(2) == doctest::Approx(-0.25));
  CHECK(s.derivative(3) == doctest::Approx(0.375));

  // pow with p = 1/2 agrees with sqrt on a generic series
  auto u = Jet::variable(0.7, len);
  auto base = u * u + 0.09;
  auto via_pow = pow(base, 0.5);
  auto via_sqrt = sqrt(base);
  for (std::size_t k = 0; k < len; ++k)
    CHECK(via_pow.coeff(k) == doctest::Approx(via_sqrt.coeff(k)).epsilon(1e-12));

  CHECK_THROWS_AS(pow(Jet::variable(-1.0, 3), 0.5), std::domain_error);
}

TEST_CASE("finite-difference fallback matches analytic derivatives") {
  CoefficientField f(1, 4);
  f.set(MultiIndex{2}, [](double, const Eigen::VectorXd& x) { return std::sin(x(0)); });
  const auto x = Eigen::VectorXd::Constant(1, 0.4);
  CHECK(f.derivative(MultiIndex{2}, MultiIndex{0}, 0, x) == doctest::Approx(std::sin(0.4)));
  CHECK(f.derivative(MultiIndex{2}, MultiIndex{1}, 0, x) ==
        doctest::Approx(std::cos(0.4)).epsilon(1e-8));
  CHECK(f.derivative(MultiIndex{2}, MultiIndex{2}, 0, x) ==
        doctest::Approx(-std::sin(0.4)).epsilon(1e-5));
  // absent coefficients are zero
  CHECK(f.value(MultiIndex{0}, 0, x) == 0.0);
  CHECK(f.derivative(MultiIndex{0}, MultiIndex{1}, 0, x) == 0.0);
}

TEST_CASE("symbol matrix assembles the second-order coefficients") {
  CoefficientField f(2, 2);
  f.set(MultiIndex{2, 0}, [](double, const Eigen::VectorXd&) { return 0.3; });
  f.set(MultiIndex{1, 1}, [](double, const Eigen::VectorXd&) { return 0.2; });
  f.set(MultiIndex{0, 2}, [](double, const Eigen::VectorXd&) { return 0.4; });
  const auto S = f.symbol_matrix(0, Eigen::VectorXd::Zero(2));
  CHECK(S(0, 0) == doctest::Approx(0.3));
  CHECK(S(1, 1) == doctest::Approx(0.4));
  CHECK(S(0, 1) == doctest::Approx(0.1));
  CHECK(S(1, 0) == doctest::Approx(0.1));
}

TEST_CASE("ellipticity validation accepts elliptic and rejects degenerate fields") {
  auto good = poly_field();
  CHECK_NOTHROW(good.validate_ellipticity(0));

  CoefficientField bad(1, 2);
  bad.set(MultiIndex{2}, [](double, const Eigen::VectorXd& x) { return x(0); });  // sign change
  bad.declare_ellipticity(10, Eigen::VectorXd::Constant(1, -1), Eigen::VectorXd::Constant(1, 1));
  CHECK_THROWS_AS(bad.validate_ellipticity(0), std::domain_error);
}

TEST_CASE("Taylor expansion recovers polynomial coefficients order by order") {
  const auto f = poly_field();
  const auto xbar = Eigen::VectorXd::Zero(1);

  const auto n0 = basis::expand_taylor(f, xbar, 0, 0);
  CHECK(eval(n0.at(MultiIndex{2}), xbar) == doctest::Approx(1.0));
  CHECK(n0.at(MultiIndex{2}).degree() == 0);

  const auto n1 = basis::expand_taylor(f, xbar, 1, 0);
  CHECK(n1.at(MultiIndex{2}).terms().at(MultiIndex{1}) == doctest::Approx(2.0));
  CHECK(n1.at(MultiIndex{1}).terms().at(MultiIndex{1}) == doctest::Approx(-1.0));

  const auto n2 = basis::expand_taylor(f, xbar, 2, 0);
  CHECK(n2.at(MultiIndex{2}).terms().at(MultiIndex{2}) == doctest::Approx(3.0));
  if (n2.count(MultiIndex{1})) CHECK(n2.at(MultiIndex{1}).is_zero());

  // off-center expansion still sums to the exact polynomial
  const auto c = Eigen::VectorXd::Constant(1, 0.7);
  Polyd total(1);
  for (int n = 0; n <= 2; ++n) total += basis::expand_taylor(f, c, n, 0).at(MultiIndex{2});
  const auto probe = Eigen::VectorXd::Constant(1, -0.3);
  CHECK(eval(total, probe) == doctest::Approx(1 + 2 * -0.3 + 3 * 0.09).epsilon(1e-13));
}

TEST_CASE("enhanced expansion with unit groups reproduces Taylor exactly") {
  const auto f = poly_field();
  const auto xbar = Eigen::VectorXd::Constant(1, 0.2);
  const std::vector<int> M{1, 2, 3};
  for (int n = 1; n <= 3; ++n) {
    const auto a = basis::expand_taylor(f, xbar, n, 0);
    const auto b = basis::expand_enhanced(f, xbar, M, n, 0);
    REQUIRE(a.size() == b.size());
    for (const auto& [alpha, pa] : a) {
      REQUIRE(b.count(alpha) == 1);
      CHECK(pa.terms() == b.at(alpha).terms());  // bit-exact
    }
  }
}

TEST_CASE("enhanced groups collect consecutive Taylor orders") {
  const auto f = poly_field();
  const auto xbar = Eigen::VectorXd::Constant(1, 0.1);
  // M = {2}: group 1 holds Taylor orders 1 and 2
  const auto grouped = basis::expand_enhanced(f, xbar, {2}, 1, 0);
  auto expected = basis::expand_taylor(f, xbar, 1, 0).at(MultiIndex{2}) +
                  basis::expand_taylor(f, xbar, 2, 0).at(MultiIndex{2});
  CHECK(poly_close(grouped.at(MultiIndex{2}), expected, 1e-14));
}

TEST_CASE("time-dependent Taylor with a constant path reduces to Taylor") {
  const auto f = poly_field();
  const auto xbar = Eigen::VectorXd::Constant(1, 0.25);
  auto path = [xbar](double) { return xbar; };
  for (int n = 0; n <= 2; ++n) {
    const auto a = basis::expand_taylor(f, xbar, n, 0.3);
    const auto b = basis::expand_time_taylor(f, path, n, 0.3);
    for (const auto& [alpha, pa] : a) {
      REQUIRE(b.count(alpha) == 1);
      CHECK(poly_close(pa, b.at(alpha), 1e-13));
    }
  }
}

TEST_CASE("Hermite projection is exact on polynomial coefficients") {
  const auto f = poly_field();
  const auto xbar = Eigen::VectorXd::Constant(1, 0.1);
  Eigen::MatrixXd W = Eigen::MatrixXd::Constant(1, 1, 0.5);

  // partial sums through degree 2 recover a2 exactly at generic points
  Polyd total(1);
  for (int n = 0; n <= 2; ++n)
    total += basis::expand_hermite(f, xbar, W, n, 0).at(MultiIndex{2});
  for (double p : {-1.0, 0.0, 0.6, 2.0}) {
    const auto probe = Eigen::VectorXd::Constant(1, p);
    CHECK(eval(total, probe) == doctest::Approx(1 + 2 * p + 3 * p * p).epsilon(1e-10));
  }

  // degree-1 coefficient a1 = -x has no component beyond order 1
  const auto h2 = basis::expand_hermite(f, xbar, W, 2, 0);
  if (h2.count(MultiIndex{1}))
    for (const auto& [m, c] : h2.at(MultiIndex{1}).terms()) CHECK(std::abs(c) < 1e-10);
}

TEST_CASE("scheme dispatch honors the center override") {
  const auto f = poly_field();
  const Eigen::VectorXd stored = Eigen::VectorXd::Zero(1);
  const Eigen::VectorXd moved = Eigen::VectorXd::Constant(1, 0.4);
  const auto scheme = ExpansionScheme::taylor(stored);
  const auto via_dispatch = basis::basis_polynomials(f, scheme, 1, 0, &moved);
  const auto direct = basis::expand_taylor(f, moved, 1, 0);
  CHECK(poly_close(via_dispatch.at(MultiIndex{2}), direct.at(MultiIndex{2}), 1e-14));
}

TEST_CASE("frozen-drift mean path integrates the drift from the anchor") {
  // time-dependent drift a1(s) = s with x0 = 0.5:
  // xbar(s) = 0.5 + (s^2 - t0^2)/2
  CoefficientField f(1, 2, /*time_homogeneous=*/false);
  f.set(MultiIndex{2}, [](double, const Eigen::VectorXd&) { return 0.5; });
  f.set(MultiIndex{1}, [](double s, const Eigen::VectorXd&) { return s; });
  const auto x0 = Eigen::VectorXd::Constant(1, 0.5);
  const auto path = basis::frozen_drift_mean_path(f, x0, 0.25);
  CHECK(path(0.25)(0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(path(1.0)(0) == doctest::Approx(0.5 + (1.0 - 0.0625) / 2).epsilon(1e-10));
}
