#pragma once

#include <stdexcept>
#include <vector>

namespace parex::util {

// Natural cubic spline through (x_i, y_i), x strictly increasing.
// Evaluation outside the knot range extrapolates linearly from the end slope.
class CubicSpline {
 public:
  CubicSpline(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 3 || y_.size() != n) throw std::invalid_argument("CubicSpline: need >= 3 knots");
    for (std::size_t i = 1; i < n; ++i)
      if (x_[i] <= x_[i - 1]) throw std::invalid_argument("CubicSpline: knots must increase");

    // second derivatives from the tridiagonal system, natural ends
    m_.assign(n, 0.0);
    std::vector<double> diag(n, 0.0), rhs(n, 0.0), off(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double hl = x_[i] - x_[i - 1], hr = x_[i + 1] - x_[i];
      diag[i] = 2.0 * (hl + hr);
      off[i] = hr;
      rhs[i] = 6.0 * ((y_[i + 1] - y_[i]) / hr - (y_[i] - y_[i - 1]) / hl);
    }
    for (std::size_t i = 2; i + 1 < n; ++i) {
      const double hl = x_[i] - x_[i - 1];
      const double w = hl / diag[i - 1];
      diag[i] -= w * off[i - 1];
      rhs[i] -= w * rhs[i - 1];
    }
    for (std::size_t i = n - 2; i >= 1; --i) {
      m_[i] = (rhs[i] - off[i] * m_[i + 1]) / diag[i];
      if (i == 1) break;
    }
  }

  double operator()(double x) const {
    const std::size_t n = x_.size();
    if (x <= x_.front()) return y_.front() + end_slope(0) * (x - x_.front());
    if (x >= x_.back()) return y_.back() + end_slope(1) * (x - x_.back());
    std::size_t lo = 0, hi = n - 1;
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      (x_[mid] <= x ? lo : hi) = mid;
    }
    const double h = x_[hi] - x_[lo], a = (x_[hi] - x) / h, b = (x - x_[lo]) / h;
    return a * y_[lo] + b * y_[hi] +
           ((a * a * a - a) * m_[lo] + (b * b * b - b) * m_[hi]) * h * h / 6.0;
  }

 private:
  double end_slope(int side) const {
    const std::size_t n = x_.size();
    if (side == 0) {
      const double h = x_[1] - x_[0];
      return (y_[1] - y_[0]) / h - h * m_[1] / 6.0;
    }
    const double h = x_[n - 1] - x_[n - 2];
    return (y_[n - 1] - y_[n - 2]) / h + h * m_[n - 2] / 6.0;
  }

  std::vector<double> x_, y_, m_;
};

}  // namespace parex::util
