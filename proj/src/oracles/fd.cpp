#include "parex/oracles/fd.hpp"

#include <Eigen/Sparse>
#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "parex/util/cubic_spline.hpp"

namespace parex::oracles {

using algebra::MultiIndex;

GridSpec GridSpec::automatic(const CoefficientField& field, double t, double T,
                             const Eigen::VectorXd& x, int nodes_per_axis, int time_steps,
                             double width_sigmas) {
  const std::size_t d = field.dim();
  GridSpec g;
  g.lo.resize(d);
  g.hi.resize(d);
  g.nodes.assign(d, nodes_per_axis);
  g.time_steps = time_steps;
  const Eigen::MatrixXd S = field.symbol_matrix(t, x);
  for (std::size_t i = 0; i < d; ++i) {
    const double mi = field.value(MultiIndex::unit(d, i), t, x);
    const double center = x(i) + mi * (T - t);
    const double sig = std::sqrt(2.0 * S(i, i) * (T - t));
    g.lo(i) = center - width_sigmas * sig;
    g.hi(i) = center + width_sigmas * sig;
  }
  return g;
}

FDSolution::FDSolution(GridSpec grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {}

double FDSolution::value_at(const Eigen::VectorXd& x) const {
  const std::size_t d = static_cast<std::size_t>(grid_.lo.size());
  if (d == 1) {
    const int n = grid_.nodes[0];
    std::vector<double> xs(n);
    const double h = (grid_.hi(0) - grid_.lo(0)) / (n - 1);
    for (int i = 0; i < n; ++i) xs[i] = grid_.lo(0) + i * h;
    util::CubicSpline s(xs, values_);
    return s(x(0));
  }
  // bilinear for d = 2
  const int nx = grid_.nodes[0], ny = grid_.nodes[1];
  const double hx = (grid_.hi(0) - grid_.lo(0)) / (nx - 1);
  const double hy = (grid_.hi(1) - grid_.lo(1)) / (ny - 1);
  double fx = (x(0) - grid_.lo(0)) / hx, fy = (x(1) - grid_.lo(1)) / hy;
  int ix = std::clamp(static_cast<int>(std::floor(fx)), 0, nx - 2);
  int iy = std::clamp(static_cast<int>(std::floor(fy)), 0, ny - 2);
  const double ax = fx - ix, ay = fy - iy;
  auto at = [&](int i, int j) { return values_[static_cast<std::size_t>(i) * ny + j]; };
  return (1 - ax) * (1 - ay) * at(ix, iy) + ax * (1 - ay) * at(ix + 1, iy) +
         (1 - ax) * ay * at(ix, iy + 1) + ax * ay * at(ix + 1, iy + 1);
}

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

// Discrete generator rows for the interior; boundary rows impose a vanishing
// second difference along each axis (asymptotically linear payoffs).
void assemble_1d(const CoefficientField& field, double time, const GridSpec& g, Triplets& trip) {
  const int n = g.nodes[0];
  const double h = (g.hi(0) - g.lo(0)) / (n - 1);
  Eigen::VectorXd x(1);
  for (int i = 1; i + 1 < n; ++i) {
    x(0) = g.lo(0) + i * h;
    const double a2 = field.value(MultiIndex{2}, time, x);
    const double a1 = field.value(MultiIndex{1}, time, x);
    const double a0 = field.value(MultiIndex{0}, time, x);
    trip.emplace_back(i, i - 1, a2 / (h * h) - a1 / (2 * h));
    trip.emplace_back(i, i, -2 * a2 / (h * h) + a0);
    trip.emplace_back(i, i + 1, a2 / (h * h) + a1 / (2 * h));
  }
}

void assemble_2d(const CoefficientField& field, double time, const GridSpec& g, Triplets& trip) {
  const int nx = g.nodes[0], ny = g.nodes[1];
  const double hx = (g.hi(0) - g.lo(0)) / (nx - 1);
  const double hy = (g.hi(1) - g.lo(1)) / (ny - 1);
  auto id = [&](int i, int j) { return i * ny + j; };
  Eigen::VectorXd x(2);
  for (int i = 1; i + 1 < nx; ++i)
    for (int j = 1; j + 1 < ny; ++j) {
      x(0) = g.lo(0) + i * hx;
      x(1) = g.lo(1) + j * hy;
      const double axx = field.value(MultiIndex{2, 0}, time, x);
      const double ayy = field.value(MultiIndex{0, 2}, time, x);
      const double axy = field.value(MultiIndex{1, 1}, time, x);
      const double ax1 = field.value(MultiIndex{1, 0}, time, x);
      const double ay1 = field.value(MultiIndex{0, 1}, time, x);
      const double a0 = field.value(MultiIndex{0, 0}, time, x);
      const int c = id(i, j);
      trip.emplace_back(c, id(i - 1, j), axx / (hx * hx) - ax1 / (2 * hx));
      trip.emplace_back(c, id(i + 1, j), axx / (hx * hx) + ax1 / (2 * hx));
      trip.emplace_back(c, id(i, j - 1), ayy / (hy * hy) - ay1 / (2 * hy));
      trip.emplace_back(c, id(i, j + 1), ayy / (hy * hy) + ay1 / (2 * hy));
      trip.emplace_back(c, c, -2 * axx / (hx * hx) - 2 * ayy / (hy * hy) + a0);
      const double cxy = axy / (4 * hx * hy);
      trip.emplace_back(c, id(i + 1, j + 1), cxy);
      trip.emplace_back(c, id(i - 1, j - 1), cxy);
      trip.emplace_back(c, id(i + 1, j - 1), -cxy);
      trip.emplace_back(c, id(i - 1, j + 1), -cxy);
    }
}

}  // namespace

FDSolution fd_solve(const CoefficientField& field, const Payoff& payoff, double t, double T,
                    const GridSpec& grid) {
  const std::size_t d = field.dim();
  if (d > 2) throw std::invalid_argument("fd_solve: d <= 2 supported");
  if (grid.time_steps < 1 || t >= T) throw std::invalid_argument("fd_solve: bad time axis");
  for (std::size_t i = 0; i < d; ++i)
    if (grid.nodes[i] < 5 || grid.hi(i) <= grid.lo(i))
      throw std::invalid_argument("fd_solve: bad spatial grid");

  const int total = d == 1 ? grid.nodes[0] : grid.nodes[0] * grid.nodes[1];
  const double dt = (T - t) / grid.time_steps;

  // terminal data
  Eigen::VectorXd v(total);
  if (d == 1) {
    const int n = grid.nodes[0];
    const double h = (grid.hi(0) - grid.lo(0)) / (n - 1);
    Eigen::VectorXd x(1);
    for (int i = 0; i < n; ++i) {
      x(0) = grid.lo(0) + i * h;
      v(i) = payoff(x);
    }
  } else {
    const int nx = grid.nodes[0], ny = grid.nodes[1];
    const double hx = (grid.hi(0) - grid.lo(0)) / (nx - 1);
    const double hy = (grid.hi(1) - grid.lo(1)) / (ny - 1);
    Eigen::VectorXd x(2);
    for (int i = 0; i < nx; ++i)
      for (int j = 0; j < ny; ++j) {
        x(0) = grid.lo(0) + i * hx;
        x(1) = grid.lo(1) + j * hy;
        v(i * ny + j) = payoff(x);
      }
  }

  // boundary index set
  std::vector<std::array<int, 3>> boundary_rows;  // (row, inner1, inner2) along the axis
  if (d == 1) {
    const int n = grid.nodes[0];
    boundary_rows.push_back({0, 1, 2});
    boundary_rows.push_back({n - 1, n - 2, n - 3});
  } else {
    const int nx = grid.nodes[0], ny = grid.nodes[1];
    auto id = [&](int i, int j) { return i * ny + j; };
    for (int j = 0; j < ny; ++j) {
      boundary_rows.push_back({id(0, j), id(1, j), id(2, j)});
      boundary_rows.push_back({id(nx - 1, j), id(nx - 2, j), id(nx - 3, j)});
    }
    for (int i = 1; i + 1 < nx; ++i) {
      boundary_rows.push_back({id(i, 0), id(i, 1), id(i, 2)});
      boundary_rows.push_back({id(i, ny - 1), id(i, ny - 2), id(i, ny - 3)});
    }
  }

  auto build_system = [&](double time, Eigen::SparseMatrix<double>& lhs,
                          Eigen::SparseMatrix<double>& rhs) {
    Triplets ta;
    if (d == 1)
      assemble_1d(field, time, grid, ta);
    else
      assemble_2d(field, time, grid, ta);
    Triplets tl, tr;
    for (int i = 0; i < total; ++i) {
      tl.emplace_back(i, i, 1.0);
      tr.emplace_back(i, i, 1.0);
    }
    for (auto& tp : ta) {
      // v_tau = A v; Crank-Nicolson: (I - dt/2 A) v_next = (I + dt/2 A) v
      tl.emplace_back(tp.row(), tp.col(), -0.5 * dt * tp.value());
      tr.emplace_back(tp.row(), tp.col(), 0.5 * dt * tp.value());
    }
    // overwrite boundary rows: v_b - 2 v_in1 + v_in2 = 0
    std::vector<char> is_boundary(total, 0);
    for (auto& b : boundary_rows) is_boundary[b[0]] = 1;
    Triplets tl2, tr2;
    for (auto& tp : tl)
      if (!is_boundary[tp.row()]) tl2.push_back(tp);
    for (auto& tp : tr)
      if (!is_boundary[tp.row()]) tr2.push_back(tp);
    for (auto& b : boundary_rows) {
      tl2.emplace_back(b[0], b[0], 1.0);
      tl2.emplace_back(b[0], b[1], -2.0);
      tl2.emplace_back(b[0], b[2], 1.0);
    }
    lhs.resize(total, total);
    rhs.resize(total, total);
    lhs.setFromTriplets(tl2.begin(), tl2.end());
    rhs.setFromTriplets(tr2.begin(), tr2.end());
  };

  Eigen::SparseMatrix<double> lhs, rhs;
  Eigen::SparseLU<Eigen::SparseMatrix<double>> solver;
  const bool homog = field.time_homogeneous();
  if (homog) {
    build_system(t, lhs, rhs);
    solver.compute(lhs);
    if (solver.info() != Eigen::Success) throw std::runtime_error("fd_solve: singular linear system");
  }

  for (int step = 0; step < grid.time_steps; ++step) {
    // marching in remaining time tau = T - time
    if (!homog) {
      const double mid = T - (step + 0.5) * dt;
      build_system(mid, lhs, rhs);
      solver.compute(lhs);
      if (solver.info() != Eigen::Success)
        throw std::runtime_error("fd_solve: singular linear system");
    }
    Eigen::VectorXd b = rhs * v;
    for (auto& br : boundary_rows) b(br[0]) = 0.0;
    v = solver.solve(b);
    if (solver.info() != Eigen::Success) throw std::runtime_error("fd_solve: solve failed");
  }

  return FDSolution(grid, std::vector<double>(v.data(), v.data() + v.size()));
}

FDPointValue fd_solve_richardson(const CoefficientField& field, const Payoff& payoff, double t,
                                 double T, const GridSpec& grid, const Eigen::VectorXd& x) {
  GridSpec fine = grid;
  for (auto& n : fine.nodes) n = 2 * n - 1;
  fine.time_steps = 2 * grid.time_steps;
  const double coarse = fd_solve(field, payoff, t, T, grid).value_at(x);
  const double fine_v = fd_solve(field, payoff, t, T, fine).value_at(x);
  FDPointValue r;
  r.value = (4.0 * fine_v - coarse) / 3.0;  // second-order scheme
  r.error_estimate = std::abs(fine_v - coarse) / 3.0;
  return r;
}

double fd_density(const CoefficientField& field, double t, const Eigen::VectorXd& x, double T,
                  const Eigen::VectorXd& y, const GridSpec& grid) {
  const std::size_t d = field.dim();
  if (d != 1) throw std::invalid_argument("fd_density: d = 1 supported");
  const double h = (grid.hi(0) - grid.lo(0)) / (grid.nodes[0] - 1);
  const double s = 2.0 * h;  // mollification width: two grid cells
  auto bump = [&](const Eigen::VectorXd& z) {
    const double u = (z(0) - y(0)) / s;
    return std::exp(-0.5 * u * u) / (s * std::sqrt(2.0 * std::numbers::pi));
  };
  const double raw = fd_solve(field, bump, t, T, grid).value_at(x);

  // Mollification bias under coefficients frozen at y: the mollified value is
  // the Gaussian with variance enlarged by s^2, the exact kernel the one
  // without.  Correct by their ratio.
  const double a2 = field.value(MultiIndex{2}, t, y);
  const double a1 = field.value(MultiIndex{1}, t, y);
  const double var = 2.0 * a2 * (T - t);
  const double mean = x(0) + a1 * (T - t);
  auto normal = [](double z, double mu, double v) {
    return std::exp(-0.5 * (z - mu) * (z - mu) / v) / std::sqrt(2.0 * std::numbers::pi * v);
  };
  const double exact = normal(y(0), mean, var);
  const double mollified = normal(y(0), mean, var + s * s);
  return raw * exact / mollified;
}

FDPointValue fd_density_richardson(const CoefficientField& field, double t,
                                   const Eigen::VectorXd& x, double T, const Eigen::VectorXd& y,
                                   const GridSpec& grid) {
  GridSpec fine = grid;
  for (auto& n : fine.nodes) n = 2 * n - 1;
  fine.time_steps = 2 * grid.time_steps;
  const double coarse = fd_density(field, t, x, T, y, grid);
  const double fine_v = fd_density(field, t, x, T, y, fine);
  FDPointValue r;
  r.value = (4.0 * fine_v - coarse) / 3.0;
  r.error_estimate = std::abs(fine_v - coarse) / 3.0;
  return r;
}

}  // namespace parex::oracles
