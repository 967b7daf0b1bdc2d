#include "parex/basis/coefficient_field.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace parex::basis {

void CoefficientField::set(const MultiIndex& alpha, ValueFn value, DerivFn derivative) {
  if (alpha.dim() != d_) throw std::invalid_argument("CoefficientField: alpha dimension mismatch");
  if (alpha.order() > 2) throw std::invalid_argument("CoefficientField: |alpha| must be <= 2");
  coeffs_[alpha] = Entry{std::move(value), std::move(derivative)};
}

double CoefficientField::value(const MultiIndex& alpha, double t, const Eigen::VectorXd& x) const {
  auto it = coeffs_.find(alpha);
  return it == coeffs_.end() ? 0.0 : it->second.value(t, x);
}

double CoefficientField::derivative(const MultiIndex& alpha, const MultiIndex& beta, double t,
                                    const Eigen::VectorXd& x) const {
  if (beta.order() > max_deriv_)
    throw std::invalid_argument("CoefficientField: requested derivative order exceeds declaration");
  auto it = coeffs_.find(alpha);
  if (it == coeffs_.end()) return 0.0;
  if (beta.order() == 0) return it->second.value(t, x);
  if (it->second.derivative) return it->second.derivative(t, x, beta);
  return fd_derivative(it->second, beta, t, x);
}

double CoefficientField::fd_derivative(const Entry& e, const MultiIndex& beta, double t,
                                       const Eigen::VectorXd& x) const {
  // one central difference per order, iterated
  std::function<double(const MultiIndex&, const Eigen::VectorXd&)> rec =
      [&](const MultiIndex& b, const Eigen::VectorXd& p) -> double {
    if (b.order() == 0) return e.value(t, p);
    std::size_t i = 0;
    while (b[i] == 0) ++i;
    MultiIndex lower = b;
    lower[i] -= 1;
    const double h =
        std::cbrt(std::numeric_limits<double>::epsilon()) * std::max(1.0, std::abs(p(i)));
    Eigen::VectorXd pp = p, pm = p;
    pp(i) += h;
    pm(i) -= h;
    return (rec(lower, pp) - rec(lower, pm)) / (2.0 * h);
  };
  return rec(beta, x);
}

Eigen::MatrixXd CoefficientField::symbol_matrix(double t, const Eigen::VectorXd& x) const {
  Eigen::MatrixXd S(d_, d_);
  for (std::size_t i = 0; i < d_; ++i)
    for (std::size_t j = 0; j < d_; ++j) {
      const MultiIndex a = MultiIndex::unit(d_, i) + MultiIndex::unit(d_, j);
      S(i, j) = value(a, t, x) * (i == j ? 1.0 : 0.5);
    }
  return S;
}

void CoefficientField::declare_ellipticity(double M, Eigen::VectorXd box_lo,
                                           Eigen::VectorXd box_hi) {
  if (M <= 0) throw std::invalid_argument("CoefficientField: ellipticity constant must be positive");
  ellipticity_M_ = M;
  box_lo_ = std::move(box_lo);
  box_hi_ = std::move(box_hi);
}

void CoefficientField::validate_ellipticity(double t, int samples, unsigned seed) const {
  if (ellipticity_M_ <= 0)
    throw std::logic_error("CoefficientField: ellipticity constant not declared");
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int s = 0; s < samples; ++s) {
    Eigen::VectorXd x(d_);
    for (std::size_t i = 0; i < d_; ++i) x(i) = box_lo_(i) + u(rng) * (box_hi_(i) - box_lo_(i));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symbol_matrix(t, x));
    const double lo = es.eigenvalues().minCoeff(), hi = es.eigenvalues().maxCoeff();
    if (lo < 1.0 / ellipticity_M_ - 1e-12 || hi > ellipticity_M_ + 1e-12)
      throw std::domain_error("CoefficientField: uniform ellipticity violated on sample cloud");
  }
}

}  // namespace parex::basis
