#pragma once

#include <Eigen/Dense>
#include <functional>
#include <map>
#include <optional>

#include "parex/algebra/multi_index.hpp"

namespace parex::basis {

using algebra::MultiIndex;

// Model coefficients a_alpha(t,x) for |alpha| <= 2, with spatial derivatives
// supplied analytically or by iterated central finite differences.
// Callbacks must be pure and reentrant; the field itself is immutable after
// registration.
class CoefficientField {
 public:
  using ValueFn = std::function<double(double t, const Eigen::VectorXd& x)>;
  using DerivFn =
      std::function<double(double t, const Eigen::VectorXd& x, const MultiIndex& beta)>;

  struct Entry {
    ValueFn value;
    DerivFn derivative;  // optional; finite differences when absent
  };

  CoefficientField(std::size_t d, int max_derivative_order, bool time_homogeneous = true)
      : d_(d), max_deriv_(max_derivative_order), time_homogeneous_(time_homogeneous) {}

  std::size_t dim() const { return d_; }
  int max_derivative_order() const { return max_deriv_; }
  bool time_homogeneous() const { return time_homogeneous_; }

  void set(const MultiIndex& alpha, ValueFn value, DerivFn derivative = nullptr);

  bool has(const MultiIndex& alpha) const { return coeffs_.count(alpha) > 0; }

  // a_alpha(t,x); absent coefficients are zero
  double value(const MultiIndex& alpha, double t, const Eigen::VectorXd& x) const;

  // D^beta a_alpha(t,x)
  double derivative(const MultiIndex& alpha, const MultiIndex& beta, double t,
                    const Eigen::VectorXd& x) const;

  // Second-order symbol matrix S with S_ii = a_{2e_i}, S_ij = a_{e_i+e_j}/2.
  Eigen::MatrixXd symbol_matrix(double t, const Eigen::VectorXd& x) const;

  // Declared ellipticity constant and sample box for the registration check.
  void declare_ellipticity(double M, Eigen::VectorXd box_lo, Eigen::VectorXd box_hi);
  double ellipticity_constant() const { return ellipticity_M_; }

  // Spot-check M^{-1}|xi|^2 <= <S xi, xi> <= M|xi|^2 on a sample cloud;
  // throws std::domain_error on violation.
  void validate_ellipticity(double t, int samples = 128, unsigned seed = 0) const;

 private:
  double fd_derivative(const Entry& e, const MultiIndex& beta, double t,
                       const Eigen::VectorXd& x) const;

  std::size_t d_;
  int max_deriv_;
  bool time_homogeneous_;
  std::map<MultiIndex, Entry> coeffs_;
  double ellipticity_M_ = 0;
  Eigen::VectorXd box_lo_, box_hi_;
};

}  // namespace parex::basis
