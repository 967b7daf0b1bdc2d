#include "parex/oracles/exact.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace parex::oracles {

double norm_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }

double norm_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

int PayoffSpec::smoothness() const {
  switch (kind) {
    case Kind::digital:
      return 0;
    case Kind::call:
      return 1;
    case Kind::gaussian_bump:
      return 2;
  }
  throw std::logic_error("PayoffSpec: unknown kind");
}

Payoff PayoffSpec::function() const {
  switch (kind) {
    case Kind::call: {
      const double K = strike;
      return [K](const Eigen::VectorXd& y) { return std::max(y(0) - K, 0.0); };
    }
    case Kind::digital: {
      const double K = strike;
      return [K](const Eigen::VectorXd& y) { return y(0) > K ? 1.0 : 0.0; };
    }
    case Kind::gaussian_bump: {
      const double c = center, w = width;
      return [c, w](const Eigen::VectorXd& y) {
        const double u = (y(0) - c) / w;
        return std::exp(-0.5 * u * u);
      };
    }
  }
  throw std::logic_error("PayoffSpec: unknown kind");
}

double exact_constant_solution(const ConstantModel& model, const PayoffSpec& payoff, double t,
                               double x, double T) {
  if (T <= t) throw std::invalid_argument("exact_constant_solution: need t < T");
  if (model.a2 <= 0) throw std::invalid_argument("exact_constant_solution: need a2 > 0");
  const double tau = T - t;
  const double mu = x + model.a1 * tau;
  const double var = 2.0 * model.a2 * tau;
  const double sig = std::sqrt(var);
  const double discount = std::exp(model.a0 * tau);

  switch (payoff.kind) {
    case PayoffSpec::Kind::call: {
      // E[(Y - K)^+] for Y ~ N(mu, var)
      const double d = (mu - payoff.strike) / sig;
      return discount * ((mu - payoff.strike) * norm_cdf(d) + sig * norm_pdf(d));
    }
    case PayoffSpec::Kind::digital:
      return discount * norm_cdf((mu - payoff.strike) / sig);
    case PayoffSpec::Kind::gaussian_bump: {
      // E[exp(-(Y-c)^2 / 2w^2)]: Gaussian convolution
      const double w2 = payoff.width * payoff.width;
      const double u = mu - payoff.center;
      return discount * payoff.width / std::sqrt(var + w2) *
             std::exp(-0.5 * u * u / (var + w2));
    }
  }
  throw std::invalid_argument("exact_constant_solution: payoff outside catalog");
}

}  // namespace parex::oracles
