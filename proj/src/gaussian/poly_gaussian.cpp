#include "parex/gaussian/poly_gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include "parex/gaussian/quadrature.hpp"

namespace parex::gaussian {

using algebra::MultiIndex;

namespace {

std::vector<double> to_std(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

// (C^{-1} w)_i as a degree-1 polynomial in w
Polyd cinv_w(const GaussianKernel& k, std::size_t i) {
  const std::size_t d = k.dim();
  Polyd p(d);
  for (std::size_t j = 0; j < d; ++j)
    p.add_term(MultiIndex::unit(d, j), k.covariance_inverse()(i, j));
  return p;
}

// Derivative polynomials in w = y - x - m, built lazily.
// sign = -1: x-derivatives (D_x^a Gamma_0 = h_a(w) Gamma_0 with
//            h_{a+e_i} = -d_{w_i} h_a + h_a (C^{-1}w)_i)
// sign = +1: y-derivatives (h_{a+e_i} = d_{w_i} h_a - h_a (C^{-1}w)_i)
class DerivTable {
 public:
  DerivTable(const GaussianKernel& k, int sign) : k_(k), sign_(sign) {
    table_.emplace(MultiIndex(k.dim()), Polyd(k.dim(), 1.0));
  }

  const Polyd& get(const MultiIndex& a) {
    auto it = table_.find(a);
    if (it != table_.end()) return it->second;
    std::size_t i = 0;
    while (a[i] == 0) ++i;
    MultiIndex prev = a;
    prev[i] -= 1;
    const Polyd& h = get(prev);
    Polyd next = h.derivative(i) * static_cast<double>(sign_) +
                 h * cinv_w(k_, i) * static_cast<double>(-sign_);
    return table_.emplace(a, std::move(next)).first->second;
  }

 private:
  const GaussianKernel& k_;
  int sign_;
  std::map<MultiIndex, Polyd> table_;
};

void require_numeric(const Weyld& op) {
  if (!op.is_numeric())
    throw std::invalid_argument("apply_weyl_to_kernel: operator scalars still carry time variables");
}

}  // namespace

double PolyGaussian::evaluate(const Eigen::VectorXd& y) const {
  return poly.evaluate(to_std(y)) * kernel.density(x, y) * kernel.killing_factor();
}

PolyGaussian apply_weyl_to_kernel(const Weyld& op, const GaussianKernel& k,
                                  const Eigen::VectorXd& x) {
  require_numeric(op);
  const std::size_t d = k.dim();
  DerivTable derivs(k, -1);
  Polyd acc(d);  // in w
  for (auto& [key, c] : op.terms()) {
    const auto& [beta, alpha] = key;
    double xb = c.numeric_value();
    for (std::size_t i = 0; i < d; ++i)
      for (int j = 0; j < beta[i]; ++j) xb *= x(i);
    acc += derivs.get(alpha) * xb;
  }
  // w = y - (x + m)
  std::vector<double> shift = to_std(Eigen::VectorXd(x + k.mean_offset()));
  return PolyGaussian{acc.substitute_affine(shift), k, x};
}

PolyGaussian apply_weyl_to_kernel_y(const Weyld& op, const GaussianKernel& k,
                                    const Eigen::VectorXd& x) {
  require_numeric(op);
  const std::size_t d = k.dim();
  DerivTable derivs(k, +1);
  std::vector<double> shift = to_std(Eigen::VectorXd(x + k.mean_offset()));
  Polyd acc(d);  // in y
  for (auto& [key, c] : op.terms()) {
    const auto& [beta, alpha] = key;
    Polyd term = derivs.get(alpha).substitute_affine(shift) * c.numeric_value();
    term = term * Polyd::monomial(beta, 1.0);  // multiplication by y^beta
    acc += term;
  }
  return PolyGaussian{acc, k, x};
}

double integrate_against(const PolyGaussian& pg, const Payoff& payoff,
                         const QuadratureSpec& quadrature) {
  const std::size_t d = pg.kernel.dim();
  const Eigen::VectorXd mean = pg.x + pg.kernel.mean_offset();

  if (quadrature.kind == QuadratureSpec::Kind::trapezoid) {
    if (d != 1) throw std::invalid_argument("integrate_against: trapezoid supports d = 1");
    if (quadrature.points < 2 || quadrature.hi <= quadrature.lo)
      throw std::invalid_argument("integrate_against: bad trapezoid grid");
    const int n = quadrature.points;
    const double h = (quadrature.hi - quadrature.lo) / (n - 1);
    double sum = 0;
    for (int i = 0; i < n; ++i) {
      Eigen::VectorXd y(1);
      y(0) = quadrature.lo + i * h;
      const double f =
          pg.poly.evaluate({y(0)}) * pg.kernel.density(pg.x, y) * payoff(y);
      sum += (i == 0 || i + 1 == n) ? 0.5 * f : f;
    }
    return sum * h * pg.kernel.killing_factor();
  }

  if (quadrature.kind == QuadratureSpec::Kind::legendre_split) {
    if (d != 1) throw std::invalid_argument("integrate_against: legendre_split supports d = 1");
    const double sig = std::sqrt(pg.kernel.covariance()(0, 0));
    // breakpoints: range ends, kinks inside the range, then <= sigma panels
    std::vector<double> cuts = {mean(0) - 12.0 * sig, mean(0) + 12.0 * sig};
    for (double s : quadrature.splits)
      if (s > cuts.front() && s < cuts.back()) cuts.push_back(s);
    std::sort(cuts.begin(), cuts.end());
    double sum = 0;
    Eigen::VectorXd y(1);
    for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
      const int panels = std::max(1, static_cast<int>(std::ceil((cuts[p + 1] - cuts[p]) / sig)));
      const double w = (cuts[p + 1] - cuts[p]) / panels;
      for (int q = 0; q < panels; ++q) {
        const auto rule =
            gauss_legendre(quadrature.order, cuts[p] + q * w, cuts[p] + (q + 1) * w);
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
          y(0) = rule.nodes[i];
          sum += rule.weights[i] * pg.poly.evaluate({y(0)}) * pg.kernel.density(pg.x, y) *
                 payoff(y);
        }
      }
    }
    return sum * pg.kernel.killing_factor();
  }

  if (quadrature.order < 1) throw std::invalid_argument("integrate_against: order must be >= 1");
  if (d > 3) throw std::invalid_argument("integrate_against: tensor Gauss-Hermite supports d <= 3");
  const auto rule = gauss_hermite(quadrature.order);
  const int q = quadrature.order;
  const Eigen::MatrixXd& L = pg.kernel.cholesky_factor();
  const double norm = std::pow(std::numbers::pi, -0.5 * static_cast<double>(d));
  double sum = 0;
  std::vector<int> idx(d, 0);
  const std::size_t total = static_cast<std::size_t>(std::pow(q, static_cast<int>(d)));
  std::vector<double> ybuf(d);
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rem = flat;
    double w = 1;
    Eigen::VectorXd z(d);
    for (std::size_t i = 0; i < d; ++i) {
      const int k = static_cast<int>(rem % q);
      rem /= q;
      z(i) = rule.nodes[k];
      w *= rule.weights[k];
    }
    const Eigen::VectorXd y = mean + std::numbers::sqrt2 * (L * z);
    for (std::size_t i = 0; i < d; ++i) ybuf[i] = y(i);
    sum += w * pg.poly.evaluate(ybuf) * payoff(y);
  }
  return sum * norm * pg.kernel.killing_factor();
}

}  // namespace parex::gaussian
