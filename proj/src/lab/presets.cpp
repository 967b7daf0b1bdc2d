#include "parex/lab/presets.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

#include "parex/basis/jet.hpp"

namespace parex::lab {

namespace {

using algebra::MultiIndex;
using basis::Jet;

constexpr int kMaxDeriv = 6;

// Register a 1-d coefficient whose spatial derivatives come from a jet lift.
void set_jet_1d(CoefficientField& field, const MultiIndex& alpha,
                std::function<Jet(const Jet&)> f) {
  auto value = [f](double, const Eigen::VectorXd& x) {
    return f(Jet::variable(x(0), 1)).coeff(0);
  };
  auto deriv = [f](double, const Eigen::VectorXd& x, const MultiIndex& beta) {
    const std::size_t k = static_cast<std::size_t>(beta[0]);
    return f(Jet::variable(x(0), k + 1)).derivative(k);
  };
  field.set(alpha, value, deriv);
}

// 2-d coefficient depending on the second coordinate only.
void set_jet_2d_v(CoefficientField& field, const MultiIndex& alpha,
                  std::function<Jet(const Jet&)> f) {
  auto value = [f](double, const Eigen::VectorXd& x) {
    return f(Jet::variable(x(1), 1)).coeff(0);
  };
  auto deriv = [f](double, const Eigen::VectorXd& x, const MultiIndex& beta) {
    if (beta[0] > 0) return 0.0;
    const std::size_t k = static_cast<std::size_t>(beta[1]);
    return f(Jet::variable(x(1), k + 1)).derivative(k);
  };
  field.set(alpha, value, deriv);
}

void set_constant(CoefficientField& field, const MultiIndex& alpha, double v) {
  field.set(
      alpha, [v](double, const Eigen::VectorXd&) { return v; },
      [v](double, const Eigen::VectorXd&, const MultiIndex& beta) {
        return beta.order() == 0 ? v : 0.0;
      });
}

Preset black_scholes() {
  // log-price coordinates: A = (sigma^2/2) d^2 + (r - sigma^2/2) d - r
  const double sigma = 0.3, r = 0.02;
  const double a2 = 0.5 * sigma * sigma;
  const double a1 = r - 0.5 * sigma * sigma;
  const double a0 = -r;
  CoefficientField field(1, kMaxDeriv);
  set_constant(field, MultiIndex{2}, a2);
  set_constant(field, MultiIndex{1}, a1);
  set_constant(field, MultiIndex{0}, a0);
  field.declare_ellipticity(25.0, Eigen::VectorXd::Constant(1, -3.0),
                            Eigen::VectorXd::Constant(1, 3.0));
  return Preset{"black_scholes",
                "constant volatility 0.3, rate 0.02, log-price coordinates",
                std::move(field),
                Eigen::VectorXd::Zero(1),
                {oracles::PayoffSpec::Kind::call, 0.0, 0.0, 1.0},
                oracles::ConstantModel{a2, a1, a0},
                25.0};
}

Jet tanh_sigma(const Jet& x) { return 0.2 + 0.1 * tanh(x); }

Preset tanh_localvol() {
  CoefficientField field(1, kMaxDeriv);
  set_jet_1d(field, MultiIndex{2}, [](const Jet& x) {
    const Jet s = tanh_sigma(x);
    return 0.5 * s * s;
  });
  field.declare_ellipticity(250.0, Eigen::VectorXd::Constant(1, -4.0),
                            Eigen::VectorXd::Constant(1, 4.0));
  return Preset{"tanh_localvol",
                "local volatility sigma(x) = 0.2 + 0.1 tanh(x), driftless",
                std::move(field),
                Eigen::VectorXd::Zero(1),
                {oracles::PayoffSpec::Kind::call, 0.0, 0.0, 1.0},
                std::nullopt,
                250.0};
}

Preset cev_smoothed() {
  // sigma(x) = sigma0 (x^2 + delta^2)^{(beta-1)/2}, regularized CEV
  const double sigma0 = 0.25, beta = 0.7, delta = 0.3;
  CoefficientField field(1, kMaxDeriv);
  set_jet_1d(field, MultiIndex{2}, [=](const Jet& x) {
    const Jet s = sigma0 * pow(x * x + delta * delta, 0.5 * (beta - 1.0));
    return 0.5 * s * s;
  });
  field.declare_ellipticity(120.0, Eigen::VectorXd::Constant(1, 0.3),
                            Eigen::VectorXd::Constant(1, 3.0));
  return Preset{"cev_smoothed",
                "CEV-type sigma(x) = 0.25 (x^2 + 0.09)^{-0.15}, mollified at the origin",
                std::move(field),
                Eigen::VectorXd::Constant(1, 1.0),
                {oracles::PayoffSpec::Kind::call, 1.0, 0.0, 1.0},
                std::nullopt,
                120.0};
}

Preset heston_like_2d() {
  // (log-price, variance-like factor v) with the variance function mollified
  // to f(v) = 0.04 + 0.02 tanh(v) so the symbol stays elliptic:
  //   dX1 = -f/2 dt + sqrt(f) dW1,  dX2 = kappa (theta - v) dt + eta dW2,
  //   corr(W1, W2) = rho.
  const double eta = 0.2, rho = -0.5, kappa = 1.0, theta = 0.06;
  auto f = [](const Jet& v) { return 0.04 + 0.02 * tanh(v); };
  CoefficientField field(2, kMaxDeriv);
  set_jet_2d_v(field, MultiIndex{2, 0}, [f](const Jet& v) { return 0.5 * f(v); });
  set_constant(field, MultiIndex{0, 2}, 0.5 * eta * eta);
  set_jet_2d_v(field, MultiIndex{1, 1},
               [f, eta, rho](const Jet& v) { return rho * eta * sqrt(f(v)); });
  set_jet_2d_v(field, MultiIndex{1, 0}, [f](const Jet& v) { return -0.5 * f(v); });
  set_jet_2d_v(field, MultiIndex{0, 1},
               [kappa, theta](const Jet& v) { return kappa * (theta - v); });
  field.declare_ellipticity(500.0, Eigen::Vector2d(-1.0, -0.3), Eigen::Vector2d(1.0, 0.5));
  return Preset{"heston_like_2d",
                "2-d stochastic-volatility-type model with mollified variance function",
                std::move(field),
                Eigen::Vector2d(0.0, 0.04),
                {oracles::PayoffSpec::Kind::call, 0.0, 0.0, 1.0},
                std::nullopt,
                500.0};
}

Preset killed_localvol() {
  // tanh local volatility with a bounded killing rate lambda(x) = 0.01 (2 + tanh x)
  CoefficientField field(1, kMaxDeriv);
  set_jet_1d(field, MultiIndex{2}, [](const Jet& x) {
    const Jet s = tanh_sigma(x);
    return 0.5 * s * s;
  });
  set_jet_1d(field, MultiIndex{0},
             [](const Jet& x) { return -1.0 * (0.01 * (2.0 + tanh(x))); });
  field.declare_ellipticity(250.0, Eigen::VectorXd::Constant(1, -4.0),
                            Eigen::VectorXd::Constant(1, 4.0));
  return Preset{"killed_localvol",
                "tanh local volatility with bounded killing rate 0.01 (2 + tanh x)",
                std::move(field),
                Eigen::VectorXd::Zero(1),
                {oracles::PayoffSpec::Kind::call, 0.0, 0.0, 1.0},
                std::nullopt,
                250.0};
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"black_scholes", "tanh_localvol", "cev_smoothed", "heston_like_2d", "killed_localvol"};
}

Preset make_preset(const std::string& name) {
  if (name == "black_scholes") return black_scholes();
  if (name == "tanh_localvol") return tanh_localvol();
  if (name == "cev_smoothed") return cev_smoothed();
  if (name == "heston_like_2d") return heston_like_2d();
  if (name == "killed_localvol") return killed_localvol();
  throw std::invalid_argument("unknown preset: " + name);
}

}  // namespace parex::lab
