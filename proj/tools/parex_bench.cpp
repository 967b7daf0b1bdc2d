#include <chrono>
#include <cmath>
#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "parex/lab/experiments.hpp"
#include "parex/oracles/mc.hpp"

namespace {

double now_ms() {
  using Clock = std::chrono::steady_clock;
  return std::chrono::duration<double, std::milli>(Clock::now().time_since_epoch()).count();
}

template <class F>
double time_ms(F&& f) {
  const double t0 = now_ms();
  f();
  return now_ms() - t0;
}

}  // namespace

// Compares the OpenMP-parallel paths (Monte Carlo blocks, bootstrap grid)
// against the serial reference implementation (threads = 1) and checks that
// both produce identical results.
int main() {
#ifdef _OPENMP
  const int hw = omp_get_max_threads();
#else
  const int hw = 1;
#endif
  std::printf("available threads: %d\n\n", hw);

  const auto preset = parex::lab::make_preset("tanh_localvol");
  const auto payoff = preset.default_payoff.function();

  // Monte Carlo: deterministic block reduction must make the result
  // independent of the thread count.
  {
    const std::int64_t paths = 200000;
    double serial_ms = 0, parallel_ms = 0;
    parex::oracles::MCResult serial, parallel;
    serial_ms = time_ms([&] {
      serial = parex::oracles::mc_solve(preset.field, payoff, 0.0, preset.x0, 1.0, paths, 50,
                                        42, /*threads=*/1);
    });
    parallel_ms = time_ms([&] {
      parallel = parex::oracles::mc_solve(preset.field, payoff, 0.0, preset.x0, 1.0, paths, 50,
                                          42, /*threads=*/0);
    });
    std::printf("mc_solve (%lld paths):\n", static_cast<long long>(paths));
    std::printf("  serial    %8.1f ms  value %.12f\n", serial_ms, serial.value);
    std::printf("  parallel  %8.1f ms  value %.12f  speedup %.2fx\n", parallel_ms,
                parallel.value, serial_ms / parallel_ms);
    std::printf("  bit-identical: %s\n\n", serial.value == parallel.value ? "yes" : "NO");
  }

  // Bootstrap grid recursion.
  {
    parex::lab::ExperimentConfig cfg;
    cfg.preset = "tanh_localvol";
    cfg.N = 1;
    const auto engine = parex::lab::make_engine(preset, cfg, 1);
    std::vector<double> grid;
    for (int i = 0; i < 161; ++i) grid.push_back(-3.0 + 6.0 * i / 160.0);
    std::vector<double> serial, parallel;
    const double serial_ms =
        time_ms([&] { serial = engine.bootstrap_solve(payoff, 0.0, grid, 1.0, 8, 1); });
    const double parallel_ms =
        time_ms([&] { parallel = engine.bootstrap_solve(payoff, 0.0, grid, 1.0, 8, 0); });
    double max_diff = 0;
    for (std::size_t i = 0; i < grid.size(); ++i)
      max_diff = std::max(max_diff, std::abs(serial[i] - parallel[i]));
    std::printf("bootstrap_solve (161 nodes, 8 steps):\n");
    std::printf("  serial    %8.1f ms\n", serial_ms);
    std::printf("  parallel  %8.1f ms  speedup %.2fx\n", parallel_ms, serial_ms / parallel_ms);
    std::printf("  max |serial - parallel|: %.3e\n", max_diff);
  }
  return 0;
}
