#pragma once

#include <map>
#include <stdexcept>

#include "parex/algebra/scalar.hpp"

namespace parex::algebra {

// Monomial in the time variables: prod_j (s_j - t)^{k_j}, stored as
// {j -> k_j} with j >= 1 and k_j >= 1.  The empty map is the constant 1.
using TimeMonomial = std::map<int, int>;

inline TimeMonomial time_monomial_product(const TimeMonomial& a, const TimeMonomial& b) {
  TimeMonomial r = a;
  for (auto& [j, k] : b) r[j] += k;
  return r;
}

// Sum of time monomials with scalar coefficients; the scalar type of a
// WeylOperator term.
template <class S>
class TimePoly {
 public:
  using Terms = std::map<TimeMonomial, S>;

  TimePoly() = default;
  explicit TimePoly(const S& c) { add_term({}, c); }
  TimePoly(const S& c, const TimeMonomial& m) { add_term(m, c); }

  static TimePoly one() { return TimePoly(ScalarTraits<S>::from_int(1)); }

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  // true if the scalar is a pure number (no time dependence)
  bool is_numeric() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
  }

  S numeric_value() const {
    if (terms_.empty()) return ScalarTraits<S>::from_int(0);
    if (!is_numeric()) throw std::logic_error("TimePoly: scalar still carries time variables");
    return terms_.begin()->second;
  }

  int max_time_index() const {
    int r = 0;
    for (auto& [m, c] : terms_)
      for (auto& [j, k] : m) r = std::max(r, j);
    return r;
  }

  void add_term(const TimeMonomial& m, const S& c) {
    auto it = terms_.find(m);
    if (it == terms_.end()) {
      if (!ScalarTraits<S>::negligible(c)) terms_.emplace(m, c);
    } else {
      it->second += c;
      if (ScalarTraits<S>::negligible(it->second)) terms_.erase(it);
    }
  }

  TimePoly& operator+=(const TimePoly& q) {
    for (auto& [m, c] : q.terms_) add_term(m, c);
    return *this;
  }

  TimePoly operator*(const TimePoly& q) const {
    TimePoly r;
    for (auto& [m1, c1] : terms_)
      for (auto& [m2, c2] : q.terms_) r.add_term(time_monomial_product(m1, m2), c1 * c2);
    return r;
  }

  TimePoly operator*(const S& c) const {
    TimePoly r;
    for (auto& [m, cc] : terms_) r.add_term(m, cc * c);
    return r;
  }

 private:
  Terms terms_;
};

}  // namespace parex::algebra
