#pragma once

#include <map>
#include <stdexcept>
#include <utility>

#include "parex/algebra/multi_index.hpp"
#include "parex/algebra/polynomial.hpp"
#include "parex/algebra/time_poly.hpp"

namespace parex::algebra {

// Normal-ordered operator sum c(s_1..s_h) x^beta D^alpha: multiplications on
// the left, derivatives on the right.  Composition normal-orders via the
// commutation rule D_i x_j = x_j D_i + delta_ij.
template <class S>
class WeylOperator {
 public:
  // (beta, alpha)
  using Key = std::pair<MultiIndex, MultiIndex>;
  using Terms = std::map<Key, TimePoly<S>>;

  explicit WeylOperator(std::size_t d) : d_(d) {}

  static WeylOperator identity(std::size_t d) {
    WeylOperator w(d);
    w.add_term(MultiIndex(d), MultiIndex(d), TimePoly<S>::one());
    return w;
  }

  // multiplication by x_i
  static WeylOperator position(std::size_t d, std::size_t i) {
    WeylOperator w(d);
    w.add_term(MultiIndex::unit(d, i), MultiIndex(d), TimePoly<S>::one());
    return w;
  }

  // D_i
  static WeylOperator momentum(std::size_t d, std::size_t i) {
    WeylOperator w(d);
    w.add_term(MultiIndex(d), MultiIndex::unit(d, i), TimePoly<S>::one());
    return w;
  }

  std::size_t dim() const { return d_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  bool is_numeric() const {
    for (auto& [k, c] : terms_)
      if (!c.is_numeric()) return false;
    return true;
  }

  void add_term(const MultiIndex& beta, const MultiIndex& alpha, const TimePoly<S>& c) {
    if (beta.dim() != d_ || alpha.dim() != d_)
      throw std::invalid_argument("WeylOperator: term dimension mismatch");
    if (c.is_zero()) return;
    auto key = Key{beta, alpha};
    auto it = terms_.find(key);
    if (it == terms_.end()) {
      terms_.emplace(std::move(key), c);
    } else {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  WeylOperator& operator+=(const WeylOperator& b) {
    require_same_dim(b);
    for (auto& [k, c] : b.terms_) add_term(k.first, k.second, c);
    return *this;
  }
  WeylOperator operator+(const WeylOperator& b) const {
    WeylOperator r = *this;
    r += b;
    return r;
  }

  WeylOperator operator*(const TimePoly<S>& c) const {
    WeylOperator r(d_);
    for (auto& [k, cc] : terms_) r.add_term(k.first, k.second, cc * c);
    return r;
  }
  WeylOperator operator*(const S& c) const { return *this * TimePoly<S>(c); }

  void require_same_dim(const WeylOperator& b) const {
    if (b.d_ != d_) throw std::invalid_argument("WeylOperator: dimension mismatch");
  }

 private:
  std::size_t d_;
  Terms terms_;
};

// A o B: apply B first, then A.  The result is in normal form.
template <class S>
WeylOperator<S> weyl_compose(const WeylOperator<S>& A, const WeylOperator<S>& B) {
  A.require_same_dim(B);
  const std::size_t d = A.dim();
  WeylOperator<S> r(d);
  for (auto& [ka, ca] : A.terms()) {
    const auto& [b1, a1] = ka;
    for (auto& [kb, cb] : B.terms()) {
      const auto& [b2, a2] = kb;
      // x^b1 D^a1 x^b2 D^a2:  D^a1 x^b2 = sum_g C(a1,g) (b2)_g x^{b2-g} D^{a1-g}
      TimePoly<S> c = ca * cb;
      for (auto& g : multi_indices_up_to(d, std::min(a1.order(), b2.order()))) {
        if (!g.leq(a1) || !g.leq(b2)) continue;
        const S f = ScalarTraits<S>::from_int(
            static_cast<std::int64_t>(binomial(a1, g) * falling_factorial(b2, g)));
        r.add_term(b1 + (b2 - g), (a1 - g) + a2, c * f);
      }
    }
  }
  return r;
}

// Apply an operator with pure-numeric scalars to a polynomial.
template <class S>
Polynomial<S> weyl_apply(const WeylOperator<S>& op, const Polynomial<S>& p) {
  if (op.dim() != p.dim()) throw std::invalid_argument("weyl_apply: dimension mismatch");
  const std::size_t d = op.dim();
  Polynomial<S> r(d);
  for (auto& [k, c] : op.terms()) {
    const auto& [beta, alpha] = k;
    const S cv = c.numeric_value();
    for (auto& [m, pc] : p.terms()) {
      if (!alpha.leq(m)) continue;
      const S f = ScalarTraits<S>::from_int(static_cast<std::int64_t>(falling_factorial(m, alpha)));
      r.add_term(beta + (m - alpha), cv * pc * f);
    }
  }
  return r;
}

// Integrate every time monomial prod_j (s_j - t)^{k_j} exactly over the
// ordered simplex t < s_1 < ... < s_h < T.  The iterated antiderivative of a
// monomial is again a monomial, so only the accumulated exponent is tracked.
template <class S>
WeylOperator<S> simplex_integrate(const WeylOperator<S>& op, int h, const S& t, const S& T) {
  if (h < 1) throw std::invalid_argument("simplex_integrate: h must be >= 1");
  const S V = T - t;
  WeylOperator<S> r(op.dim());
  for (auto& [k, c] : op.terms()) {
    TimePoly<S> out;
    for (auto& [mono, coef] : c.terms()) {
      if (!mono.empty() && mono.rbegin()->first > h)
        throw std::invalid_argument("simplex_integrate: time index exceeds h");
      S value = coef;
      int acc = 0;
      for (int j = 1; j <= h; ++j) {
        auto it = mono.find(j);
        acc += (it == mono.end() ? 0 : it->second) + 1;
        value /= ScalarTraits<S>::from_int(acc);
      }
      for (int e = 0; e < acc; ++e) value *= V;
      out += TimePoly<S>(value);
    }
    r.add_term(k.first, k.second, out);
  }
  return r;
}

// Drop terms whose every monomial coefficient is below rel_tol times the
// largest coefficient magnitude in the operator.
template <class S>
WeylOperator<S> weyl_prune(const WeylOperator<S>& op, double rel_tol) {
  double maxc = 0;
  for (auto& [k, c] : op.terms())
    for (auto& [m, v] : c.terms())
      maxc = std::max(maxc, std::abs(ScalarTraits<S>::to_double(v)));
  if (maxc == 0) return op;
  WeylOperator<S> r(op.dim());
  for (auto& [k, c] : op.terms()) {
    TimePoly<S> kept;
    for (auto& [m, v] : c.terms())
      if (std::abs(ScalarTraits<S>::to_double(v)) >= rel_tol * maxc) kept.add_term(m, v);
    r.add_term(k.first, k.second, kept);
  }
  return r;
}

}  // namespace parex::algebra
