#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace parex::algebra {

// Exponent vector in N_0^d.  Used both as a monomial exponent and as a
// derivative order.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::size_t d) : e_(d, 0) {}
  MultiIndex(std::initializer_list<int> e) : e_(e) { check_nonneg(); }
  explicit MultiIndex(std::vector<int> e) : e_(std::move(e)) { check_nonneg(); }

  static MultiIndex unit(std::size_t d, std::size_t i) {
    MultiIndex m(d);
    m.e_[i] = 1;
    return m;
  }

  std::size_t dim() const { return e_.size(); }
  int operator[](std::size_t i) const { return e_[i]; }
  int& operator[](std::size_t i) { return e_[i]; }

  int order() const { return std::accumulate(e_.begin(), e_.end(), 0); }

  // beta! = beta_1! ... beta_d!
  std::uint64_t factorial() const {
    std::uint64_t f = 1;
    for (int k : e_)
      for (int j = 2; j <= k; ++j) f *= static_cast<std::uint64_t>(j);
    return f;
  }

  bool is_zero() const { return order() == 0; }

  // component-wise alpha <= beta
  bool leq(const MultiIndex& b) const {
    for (std::size_t i = 0; i < e_.size(); ++i)
      if (e_[i] > b.e_[i]) return false;
    return true;
  }

  MultiIndex operator+(const MultiIndex& b) const {
    MultiIndex r = *this;
    for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] += b.e_[i];
    return r;
  }

  MultiIndex operator-(const MultiIndex& b) const {
    MultiIndex r = *this;
    for (std::size_t i = 0; i < e_.size(); ++i) {
      r.e_[i] -= b.e_[i];
      if (r.e_[i] < 0) throw std::invalid_argument("MultiIndex subtraction would be negative");
    }
    return r;
  }

  auto operator<=>(const MultiIndex&) const = default;

  std::string str() const {
    std::string s = "(";
    for (std::size_t i = 0; i < e_.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(e_[i]);
    }
    return s + ")";
  }

 private:
  void check_nonneg() const {
    for (int k : e_)
      if (k < 0) throw std::invalid_argument("MultiIndex exponents must be non-negative");
  }

  std::vector<int> e_;
};

// prod_i C(a_i, g_i)
inline std::uint64_t binomial(const MultiIndex& a, const MultiIndex& g) {
  auto choose = [](int n, int k) -> std::uint64_t {
    if (k < 0 || k > n) return 0;
    std::uint64_t r = 1;
    for (int j = 1; j <= k; ++j) r = r * static_cast<std::uint64_t>(n - k + j) / j;
    return r;
  };
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < a.dim(); ++i) r *= choose(a[i], g[i]);
  return r;
}

// prod_i b_i! / (b_i - g_i)!   (falling factorial, assumes g <= b)
inline std::uint64_t falling_factorial(const MultiIndex& b, const MultiIndex& g) {
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < b.dim(); ++i)
    for (int j = 0; j < g[i]; ++j) r *= static_cast<std::uint64_t>(b[i] - j);
  return r;
}

// All multi-indices of dimension d with |beta| == n, lexicographic.
inline std::vector<MultiIndex> multi_indices_of_order(std::size_t d, int n) {
  std::vector<MultiIndex> out;
  MultiIndex cur(d);
  auto rec = [&](auto&& self, std::size_t i, int rem) -> void {
    if (i + 1 == d) {
      cur[i] = rem;
      out.push_back(cur);
      return;
    }
    for (int k = rem; k >= 0; --k) {
      cur[i] = k;
      self(self, i + 1, rem - k);
    }
  };
  if (d == 0) return out;
  rec(rec, 0, n);
  return out;
}

// All multi-indices with |beta| <= n.
inline std::vector<MultiIndex> multi_indices_up_to(std::size_t d, int n) {
  std::vector<MultiIndex> out;
  for (int k = 0; k <= n; ++k)
    for (auto& m : multi_indices_of_order(d, k)) out.push_back(m);
  return out;
}

}  // namespace parex::algebra
