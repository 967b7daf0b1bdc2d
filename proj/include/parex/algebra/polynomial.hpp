#pragma once

#include <map>
#include <stdexcept>
#include <vector>

#include "parex/algebra/multi_index.hpp"
#include "parex/algebra/scalar.hpp"

namespace parex::algebra {

// Multivariate polynomial as a term map MultiIndex -> coefficient.
// Normalized: no stored term has a negligible coefficient.
template <class S>
class Polynomial {
 public:
  using Terms = std::map<MultiIndex, S>;

  explicit Polynomial(std::size_t d) : d_(d) {}
  Polynomial(std::size_t d, const S& constant) : d_(d) { add_term(MultiIndex(d), constant); }

  static Polynomial variable(std::size_t d, std::size_t i) {
    Polynomial p(d);
    p.add_term(MultiIndex::unit(d, i), ScalarTraits<S>::from_int(1));
    return p;
  }

  static Polynomial monomial(const MultiIndex& m, const S& c) {
    Polynomial p(m.dim());
    p.add_term(m, c);
    return p;
  }

  std::size_t dim() const { return d_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  // -1 for the zero polynomial
  int degree() const {
    int deg = -1;
    for (auto& [m, c] : terms_) deg = std::max(deg, m.order());
    return deg;
  }

  void add_term(const MultiIndex& m, const S& c) {
    if (m.dim() != d_) throw std::invalid_argument("Polynomial: term dimension mismatch");
    auto it = terms_.find(m);
    if (it == terms_.end()) {
      if (!ScalarTraits<S>::negligible(c)) terms_.emplace(m, c);
    } else {
      it->second += c;
      if (ScalarTraits<S>::negligible(it->second)) terms_.erase(it);
    }
  }

  Polynomial& operator+=(const Polynomial& q) {
    require_same_dim(q);
    for (auto& [m, c] : q.terms_) add_term(m, c);
    return *this;
  }
  Polynomial operator+(const Polynomial& q) const {
    Polynomial r = *this;
    r += q;
    return r;
  }
  Polynomial operator-(const Polynomial& q) const { return *this + q * ScalarTraits<S>::from_int(-1); }

  Polynomial operator*(const S& c) const {
    Polynomial r(d_);
    for (auto& [m, cc] : terms_) r.add_term(m, cc * c);
    return r;
  }

  Polynomial operator*(const Polynomial& q) const {
    require_same_dim(q);
    Polynomial r(d_);
    for (auto& [m1, c1] : terms_)
      for (auto& [m2, c2] : q.terms_) r.add_term(m1 + m2, c1 * c2);
    return r;
  }

  // Partial derivative d/dx_i.
  Polynomial derivative(std::size_t i) const {
    Polynomial r(d_);
    for (auto& [m, c] : terms_) {
      if (m[i] == 0) continue;
      MultiIndex n = m;
      n[i] -= 1;
      r.add_term(n, c * ScalarTraits<S>::from_int(m[i]));
    }
    return r;
  }

  // p(x) -> p(x - shift)  (centered monomials)
  Polynomial substitute_affine(const std::vector<S>& shift) const {
    if (shift.size() != d_) throw std::invalid_argument("Polynomial: shift dimension mismatch");
    std::vector<Polynomial> args;
    args.reserve(d_);
    for (std::size_t i = 0; i < d_; ++i) {
      Polynomial a = variable(d_, i);
      a.add_term(MultiIndex(d_), -shift[i]);
      args.push_back(a);
    }
    return compose(args);
  }

  // p(arg_1(x), ..., arg_d(x))
  Polynomial compose(const std::vector<Polynomial>& args) const {
    if (args.size() != d_) throw std::invalid_argument("Polynomial: compose arity mismatch");
    Polynomial r(args.empty() ? d_ : args[0].dim());
    for (auto& [m, c] : terms_) {
      Polynomial term(r.dim(), c);
      for (std::size_t i = 0; i < d_; ++i)
        for (int k = 0; k < m[i]; ++k) term = term * args[i];
      r += term;
    }
    return r;
  }

  S evaluate(const std::vector<S>& x) const {
    if (x.size() != d_) throw std::invalid_argument("Polynomial: evaluation dimension mismatch");
    S r = ScalarTraits<S>::from_int(0);
    for (auto& [m, c] : terms_) {
      S t = c;
      for (std::size_t i = 0; i < d_; ++i)
        for (int k = 0; k < m[i]; ++k) t *= x[i];
      r += t;
    }
    return r;
  }

 private:
  void require_same_dim(const Polynomial& q) const {
    if (q.d_ != d_) throw std::invalid_argument("Polynomial: dimension mismatch");
  }

  std::size_t d_ = 0;
  Terms terms_;
};

}  // namespace parex::algebra
