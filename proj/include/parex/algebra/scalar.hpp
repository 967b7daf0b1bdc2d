#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <cstdint>

namespace parex::algebra {

// Exact rationals for the algebra-level tests; doubles in the production path.
using Rational = boost::multiprecision::cpp_rational;

template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
  static double from_int(std::int64_t n) { return static_cast<double>(n); }
  static double ratio(std::int64_t n, std::int64_t d) {
    return static_cast<double>(n) / static_cast<double>(d);
  }
  // Underflow noise accumulates in high-order compositions; prune it.
  static bool negligible(double c) { return std::abs(c) < 1e-300; }
  static double to_double(double c) { return c; }
};

template <>
struct ScalarTraits<Rational> {
  static Rational from_int(std::int64_t n) { return Rational(n); }
  static Rational ratio(std::int64_t n, std::int64_t d) { return Rational(n, d); }
  static bool negligible(const Rational& c) { return c == 0; }
  static double to_double(const Rational& c) { return static_cast<double>(c); }
};

}  // namespace parex::algebra
