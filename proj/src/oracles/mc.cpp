#include "parex/oracles/mc.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace parex::oracles {

namespace {

constexpr std::int64_t kBlockSize = 4096;

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

struct BlockSums {
  double sum = 0, sum_sq = 0;
};

}  // namespace

MCResult mc_solve(const CoefficientField& field, const Payoff& payoff, double t,
                  const Eigen::VectorXd& x, double T, std::int64_t paths, int steps,
                  std::uint64_t seed, int threads) {
  const std::size_t d = field.dim();
  if (paths < 1 || steps < 1 || t >= T) throw std::invalid_argument("mc_solve: bad parameters");
  const double dt = (T - t) / steps;
  const double sqrt_dt = std::sqrt(dt);
  const std::int64_t blocks = (paths + kBlockSize - 1) / kBlockSize;

  std::vector<BlockSums> per_block(static_cast<std::size_t>(blocks));

  using algebra::MultiIndex;
  std::vector<MultiIndex> e(d);
  for (std::size_t i = 0; i < d; ++i) e[i] = MultiIndex::unit(d, i);
  const MultiIndex zero(d);

  auto run_block = [&](std::int64_t b) {
    std::mt19937_64 rng(splitmix64(seed ^ static_cast<std::uint64_t>(b)));
    std::normal_distribution<double> gauss(0.0, 1.0);
    const std::int64_t lo = b * kBlockSize;
    const std::int64_t hi = std::min(paths, lo + kBlockSize);
    double sum = 0, sum_sq = 0;
    Eigen::VectorXd X(d), drift(d), dW(d);
    for (std::int64_t p = lo; p < hi; ++p) {
      X = x;
      double log_discount = 0;
      double time = t;
      for (int s = 0; s < steps; ++s) {
        const Eigen::MatrixXd S = field.symbol_matrix(time, X);
        Eigen::LLT<Eigen::MatrixXd> llt(2.0 * S);
        if (llt.info() != Eigen::Success)
          throw std::runtime_error("mc_solve: non-SPD diffusion at a visited point");
        for (std::size_t i = 0; i < d; ++i) {
          drift(i) = field.value(e[i], time, X);
          dW(i) = gauss(rng) * sqrt_dt;
        }
        log_discount += field.value(zero, time, X) * dt;
        X += drift * dt + llt.matrixL() * dW;
        time += dt;
      }
      const double v = std::exp(log_discount) * payoff(X);
      sum += v;
      sum_sq += v * v;
    }
    per_block[static_cast<std::size_t>(b)] = {sum, sum_sq};
  };

  // Exceptions may not cross the parallel region; capture and rethrow.
  std::exception_ptr failure = nullptr;
  auto guarded = [&](std::int64_t b) {
    try {
      run_block(b);
    } catch (...) {
#ifdef _OPENMP
#pragma omp critical(parex_mc_failure)
#endif
      {
        if (!failure) failure = std::current_exception();
      }
    }
  };

#ifdef _OPENMP
  int nt = threads;
  if (nt <= 0) nt = omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(nt)
  for (std::int64_t b = 0; b < blocks; ++b) guarded(b);
#else
  (void)threads;
  for (std::int64_t b = 0; b < blocks; ++b) guarded(b);
#endif
  if (failure) std::rethrow_exception(failure);

  // fixed combination order, independent of thread scheduling
  double sum = 0, sum_sq = 0;
  for (const auto& bs : per_block) {
    sum += bs.sum;
    sum_sq += bs.sum_sq;
  }
  MCResult r;
  r.paths = paths;
  r.value = sum / static_cast<double>(paths);
  const double var =
      std::max(0.0, sum_sq / static_cast<double>(paths) - r.value * r.value);
  r.std_error = std::sqrt(var / static_cast<double>(paths));
  return r;
}

}  // namespace parex::oracles
