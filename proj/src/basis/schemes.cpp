#include "parex/basis/schemes.hpp"

#include <stdexcept>

#include "parex/gaussian/hermite.hpp"
#include "parex/gaussian/quadrature.hpp"

namespace parex::basis {

ExpansionScheme ExpansionScheme::taylor(Eigen::VectorXd xbar) {
  ExpansionScheme s;
  s.kind = Kind::taylor;
  s.xbar = std::move(xbar);
  return s;
}

ExpansionScheme ExpansionScheme::enhanced_taylor(Eigen::VectorXd xbar, std::vector<int> M) {
  for (std::size_t i = 0; i < M.size(); ++i) {
    const int prev = i == 0 ? 0 : M[i - 1];
    if (M[i] < prev) throw std::invalid_argument("enhanced_taylor: M must be non-decreasing");
  }
  ExpansionScheme s;
  s.kind = Kind::enhanced_taylor;
  s.xbar = std::move(xbar);
  s.M = std::move(M);
  return s;
}

ExpansionScheme ExpansionScheme::time_taylor(std::function<Eigen::VectorXd(double)> path) {
  ExpansionScheme s;
  s.kind = Kind::time_taylor;
  s.xbar_path = std::move(path);
  return s;
}

ExpansionScheme ExpansionScheme::hermite(Eigen::VectorXd xbar, Eigen::MatrixXd weight) {
  ExpansionScheme s;
  s.kind = Kind::hermite;
  s.xbar = std::move(xbar);
  s.weight = std::move(weight);
  return s;
}

namespace {

// Taylor orders lo..hi collected into one group
CoeffPolys taylor_group(const CoefficientField& field, const Eigen::VectorXd& xbar, int lo, int hi,
                        double t) {
  const std::size_t d = field.dim();
  if (hi > field.max_derivative_order())
    throw std::invalid_argument("expansion: field does not supply derivatives to the needed order");
  CoeffPolys out;
  for (auto& alpha : algebra::multi_indices_up_to(d, 2)) {
    if (!field.has(alpha)) continue;
    Polyd p(d);
    for (int n = lo; n <= hi; ++n) {
      for (auto& beta : algebra::multi_indices_of_order(d, n)) {
        const double c = field.derivative(alpha, beta, t, xbar) /
                         static_cast<double>(beta.factorial());
        if (c != 0.0) p += Polyd::monomial(beta, c);
      }
    }
    // re-center: monomials are (x - xbar)^beta
    std::vector<double> shift(d);
    for (std::size_t i = 0; i < d; ++i) shift[i] = xbar(i);
    out.emplace(alpha, p.substitute_affine(shift));
  }
  return out;
}

}  // namespace

CoeffPolys expand_taylor(const CoefficientField& field, const Eigen::VectorXd& xbar, int n,
                         double t) {
  if (n < 0) throw std::invalid_argument("expand_taylor: n must be >= 0");
  return taylor_group(field, xbar, n, n, t);
}

CoeffPolys expand_enhanced(const CoefficientField& field, const Eigen::VectorXd& xbar,
                           const std::vector<int>& M, int n, double t) {
  if (n < 0) throw std::invalid_argument("expand_enhanced: n must be >= 0");
  if (n == 0) return taylor_group(field, xbar, 0, 0, t);
  if (static_cast<std::size_t>(n) > M.size())
    throw std::invalid_argument("expand_enhanced: n exceeds length of M sequence");
  const int prev = n == 1 ? 0 : M[n - 2];
  if (M[n - 1] < prev) throw std::invalid_argument("expand_enhanced: M must be non-decreasing");
  return taylor_group(field, xbar, 1 + prev, M[n - 1], t);
}

CoeffPolys expand_time_taylor(const CoefficientField& field,
                              const std::function<Eigen::VectorXd(double)>& xbar_path, int n,
                              double t) {
  return expand_taylor(field, xbar_path(t), n, t);
}

CoeffPolys expand_hermite(const CoefficientField& field, const Eigen::VectorXd& xbar,
                          const Eigen::MatrixXd& weight, int n, double t, int quadrature_order) {
  if (n < 0) throw std::invalid_argument("expand_hermite: n must be >= 0");
  const std::size_t d = field.dim();
  CoeffPolys out;
  for (auto& alpha : algebra::multi_indices_up_to(d, 2)) {
    if (!field.has(alpha)) continue;
    auto f = [&](const Eigen::VectorXd& x) { return field.value(alpha, t, x); };
    auto coeffs = gaussian::hermite_inner_products(f, xbar, weight, n, quadrature_order);
    Polyd p(d);
    for (auto& beta : algebra::multi_indices_of_order(d, n))
      p += gaussian::hermite_tensor(beta, xbar, weight) * coeffs.at(beta);
    out.emplace(alpha, std::move(p));
  }
  return out;
}

CoeffPolys basis_polynomials(const CoefficientField& field, const ExpansionScheme& scheme, int n,
                             double t, const Eigen::VectorXd* center) {
  using Kind = ExpansionScheme::Kind;
  if (center && !scheme.accepts_arbitrary_center())
    throw std::invalid_argument("basis_polynomials: scheme kind does not accept an arbitrary center");
  switch (scheme.kind) {
    case Kind::taylor:
      return expand_taylor(field, center ? *center : scheme.xbar, n, t);
    case Kind::enhanced_taylor:
      return expand_enhanced(field, center ? *center : scheme.xbar, scheme.M, n, t);
    case Kind::time_taylor:
      return expand_time_taylor(field, scheme.xbar_path, n, t);
    case Kind::hermite:
      return expand_hermite(field, center ? *center : scheme.xbar, scheme.weight, n, t,
                            scheme.hermite_quadrature_order);
  }
  throw std::logic_error("basis_polynomials: unknown scheme kind");
}

std::function<Eigen::VectorXd(double)> frozen_drift_mean_path(const CoefficientField& field,
                                                              Eigen::VectorXd x0, double t0,
                                                              int quadrature_order) {
  const std::size_t d = field.dim();
  return [=, field = field](double s) -> Eigen::VectorXd {
    Eigen::VectorXd m = x0;
    if (s == t0) return m;
    auto rule = gaussian::gauss_legendre(quadrature_order, t0, s);
    for (std::size_t q = 0; q < rule.nodes.size(); ++q)
      for (std::size_t i = 0; i < d; ++i)
        m(i) += rule.weights[q] * field.value(MultiIndex::unit(d, i), rule.nodes[q], x0);
    return m;
  };
}

}  // namespace parex::basis
