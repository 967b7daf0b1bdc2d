#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace parex::basis {

// Univariate truncated Taylor series; used by the presets to supply exact
// spatial derivatives of their coefficient functions to any order.
class Jet {
 public:
  Jet(std::size_t len, double c0 = 0) : c_(len, 0.0) {
    if (len == 0) throw std::invalid_argument("Jet: need at least the constant term");
    c_[0] = c0;
  }

  static Jet variable(double x0, std::size_t len) {
    Jet j(len, x0);
    if (len > 1) j.c_[1] = 1.0;
    return j;
  }
  static Jet constant(double v, std::size_t len) { return Jet(len, v); }

  std::size_t size() const { return c_.size(); }
  double coeff(std::size_t k) const { return k < c_.size() ? c_[k] : 0.0; }

  // k-th derivative at the expansion point
  double derivative(std::size_t k) const {
    double f = 1;
    for (std::size_t j = 2; j <= k; ++j) f *= static_cast<double>(j);
    return coeff(k) * f;
  }

  Jet operator+(const Jet& b) const {
    Jet r = *this;
    for (std::size_t k = 0; k < r.c_.size(); ++k) r.c_[k] += b.coeff(k);
    return r;
  }
  Jet operator-(const Jet& b) const {
    Jet r = *this;
    for (std::size_t k = 0; k < r.c_.size(); ++k) r.c_[k] -= b.coeff(k);
    return r;
  }
  Jet operator*(const Jet& b) const {
    Jet r(c_.size());
    for (std::size_t k = 0; k < c_.size(); ++k)
      for (std::size_t j = 0; j + k < c_.size(); ++j) r.c_[k + j] += c_[k] * b.coeff(j);
    return r;
  }
  Jet operator*(double s) const {
    Jet r = *this;
    for (auto& v : r.c_) v *= s;
    return r;
  }
  Jet operator+(double s) const {
    Jet r = *this;
    r.c_[0] += s;
    return r;
  }

  friend Jet operator*(double s, const Jet& j) { return j * s; }
  friend Jet operator+(double s, const Jet& j) { return j + s; }
  friend Jet operator-(double s, const Jet& j) { return (j * -1.0) + s; }

 private:
  // Solve w' = g(w) u' term by term given w_0; g supplied as a coefficient
  // callback evaluated on the current partial series of w.
  template <class G>
  static Jet ode_lift(const Jet& u, double w0, G&& g) {
    Jet w(u.c_.size(), w0);
    for (std::size_t k = 1; k < u.c_.size(); ++k) {
      // (k w_k) = sum_{j=1..k} j u_j * gw_{k-j}, with gw from the series so far
      Jet gw = g(w);
      double s = 0;
      for (std::size_t j = 1; j <= k; ++j) s += static_cast<double>(j) * u.coeff(j) * gw.coeff(k - j);
      w.c_[k] = s / static_cast<double>(k);
    }
    return w;
  }

 public:
  friend Jet exp(const Jet& u) {
    return ode_lift(u, std::exp(u.coeff(0)), [](const Jet& w) { return w; });
  }
  friend Jet tanh(const Jet& u) {
    return ode_lift(u, std::tanh(u.coeff(0)),
                    [](const Jet& w) { return 1.0 - w * w; });
  }
  friend Jet sqrt(const Jet& u) {
    // s' = u' / (2 s); rearranged with the reciprocal series of s
    Jet s(u.c_.size(), std::sqrt(u.coeff(0)));
    for (std::size_t k = 1; k < u.c_.size(); ++k) {
      double conv = 0;
      for (std::size_t j = 1; j < k; ++j) conv += s.c_[j] * s.c_[k - j];
      s.c_[k] = (u.coeff(k) - conv) / (2.0 * s.c_[0]);
    }
    return s;
  }
  friend Jet pow(const Jet& u, double p) {
    if (u.coeff(0) <= 0) throw std::domain_error("Jet pow: base must be positive");
    // w = u^p from u w' = p u' w
    Jet w(u.c_.size(), std::pow(u.coeff(0), p));
    for (std::size_t k = 1; k < u.c_.size(); ++k) {
      double s = 0;
      for (std::size_t j = 1; j <= k; ++j)
        s += (p * static_cast<double>(j) - static_cast<double>(k - j)) * u.coeff(j) * w.c_[k - j];
      w.c_[k] = s / (static_cast<double>(k) * u.coeff(0));
    }
    return w;
  }

 private:
  std::vector<double> c_;
};

}  // namespace parex::basis
