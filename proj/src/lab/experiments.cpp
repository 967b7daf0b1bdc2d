#include "parex/lab/experiments.hpp"

#include <numbers>
#include <chrono>
#include <optional>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "parex/oracles/fd.hpp"
#include "parex/oracles/mc.hpp"

namespace parex::lab {

namespace {

std::string fmt(double v) {
  std::ostringstream out;
  out << std::setprecision(17) << v;
  return out.str();
}

std::string fmt_vec(const Eigen::VectorXd& v) {
  std::string s;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) s += ";";
    s += fmt(v(i));
  }
  return s;
}

Eigen::VectorXd point_or_default(const std::vector<double>& given, const Eigen::VectorXd& fallback,
                                 const char* what) {
  if (given.empty()) return fallback;
  if (static_cast<Eigen::Index>(given.size()) != fallback.size())
    throw ConfigError(std::string("[experiment] ") + what + ": dimension mismatch with model");
  return Eigen::Map<const Eigen::VectorXd>(given.data(), static_cast<Eigen::Index>(given.size()));
}

int effective_gh_order(const ExperimentConfig& cfg) {
  if (cfg.gh_order > 0) return cfg.gh_order;
  return cfg.payoff.kind == oracles::PayoffSpec::Kind::gaussian_bump ? 20 : 60;
}

nlohmann::json base_metadata(const ExperimentConfig& cfg, const std::string& experiment) {
  nlohmann::json meta;
  meta["experiment"] = experiment;
  meta["versions"]["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." +
                              std::to_string(EIGEN_MAJOR_VERSION) + "." +
                              std::to_string(EIGEN_MINOR_VERSION);
  meta["versions"]["cxx_standard"] = static_cast<long>(__cplusplus);
  nlohmann::json echo;
  echo["model"]["preset"] = cfg.preset;
  echo["scheme"]["kind"] = cfg.scheme_kind;
  echo["scheme"]["N"] = cfg.N;
  echo["payoff"]["k"] = cfg.k;
  echo["experiment"]["t"] = cfg.t;
  echo["experiment"]["horizons"] = cfg.horizons;
  echo["experiment"]["m_values"] = cfg.m_values;
  echo["experiment"]["oracle"] = cfg.oracle;
  echo["experiment"]["slope_tol"] = cfg.slope_tol;
  echo["numerics"]["gh_order"] = effective_gh_order(cfg);
  echo["numerics"]["fd_nodes"] = cfg.fd_nodes;
  echo["numerics"]["fd_steps"] = cfg.fd_steps;
  echo["numerics"]["mc_paths"] = cfg.mc_paths;
  echo["numerics"]["mc_steps"] = cfg.mc_steps;
  echo["numerics"]["seed"] = cfg.seed;
  echo["numerics"]["threads"] = cfg.threads;
  meta["config"] = echo;
  return meta;
}

class Timer {
 public:
  double ms() const {
    return std::chrono::duration<double, std::milli>(Clock::now() - start_).count();
  }

 private:
  using Clock = std::chrono::steady_clock;
  Clock::time_point start_ = Clock::now();
};

oracles::PayoffSpec payoff_for(const ExperimentConfig& cfg, const Preset& preset) {
  return cfg.payoff_from_config ? cfg.payoff : preset.default_payoff;
}

// Kinked payoffs in d = 1 get the kink-splitting panel quadrature; smooth
// payoffs keep Gauss-Hermite.
std::optional<gaussian::QuadratureSpec> quad_for(const oracles::PayoffSpec& spec,
                                                 std::size_t dim) {
  if (dim != 1 || spec.kind == oracles::PayoffSpec::Kind::gaussian_bump) return std::nullopt;
  return gaussian::QuadratureSpec::legendre_split({spec.strike});
}

}  // namespace

namespace {

void write_csv_field(std::ostream& out, const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) {
    out << field;
    return;
  }
  out << '"';
  for (char c : field) {
    if (c == '"') out << '"';
    out << c;
  }
  out << '"';
}

}  // namespace

void Table::write_csv(std::ostream& out) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out << ',';
    write_csv_field(out, header[i]);
  }
  out << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      write_csv_field(out, row[i]);
    }
    out << "\n";
  }
}

SlopeFit fit_loglog(const std::vector<double>& h, const std::vector<double>& err,
                    const std::vector<char>& exclude) {
  SlopeFit fit;
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (i < exclude.size() && exclude[i]) continue;
    if (err[i] <= 0) continue;
    xs.push_back(std::log(h[i]));
    ys.push_back(std::log(err[i]));
  }
  fit.used = static_cast<int>(xs.size());
  if (xs.size() < 2) {
    fit.degenerate = true;
    return fit;
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= xs.size();
  my /= ys.size();
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  fit.slope = sxy / sxx;
  double ss = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - my - fit.slope * (xs[i] - mx);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / xs.size());
  return fit;
}

OracleValue oracle_price(const ExperimentConfig& cfg, const Preset& preset,
                         const gaussian::Payoff& payoff, double t, const Eigen::VectorXd& x,
                         double T) {
  if (cfg.oracle == "exact") {
    if (!preset.constant)
      throw ConfigError("[experiment] oracle: exact oracle needs constant coefficients");
    return {oracles::exact_constant_solution(*preset.constant, payoff_for(cfg, preset), t, x(0),
                                             T),
            1e-14};
  }
  if (cfg.oracle == "mc") {
    const auto r = oracles::mc_solve(preset.field, payoff, t, x, T, cfg.mc_paths, cfg.mc_steps,
                                     cfg.seed, cfg.threads);
    return {r.value, r.std_error};
  }
  const auto grid =
      oracles::GridSpec::automatic(preset.field, t, T, x, cfg.fd_nodes, cfg.fd_steps);
  const auto r = oracles::fd_solve_richardson(preset.field, payoff, t, T, grid, x);
  return {r.value, r.error_estimate};
}

engine::Engine make_engine(const Preset& preset, const ExperimentConfig& cfg, int order) {
  const Eigen::VectorXd x0 = point_or_default(cfg.x, preset.x0, "x");
  basis::ExpansionScheme scheme;
  if (cfg.scheme_kind == "taylor") {
    scheme = basis::ExpansionScheme::taylor(x0);
  } else if (cfg.scheme_kind == "enhanced_taylor") {
    std::vector<int> M = cfg.enhanced_M;
    if (M.empty())
      for (int n = 1; n <= std::max(order, 1); ++n) M.push_back(n);
    scheme = basis::ExpansionScheme::enhanced_taylor(x0, M);
  } else if (cfg.scheme_kind == "time_taylor") {
    scheme = basis::ExpansionScheme::time_taylor(
        basis::frozen_drift_mean_path(preset.field, x0, cfg.t));
  } else {
    const Eigen::MatrixXd weight =
        cfg.hermite_weight_scale *
        Eigen::MatrixXd::Identity(x0.size(), x0.size());
    scheme = basis::ExpansionScheme::hermite(x0, weight);
  }

  engine::ExpansionPlan plan;
  plan.scheme = scheme;
  plan.order = order;
  plan.freezing = scheme.accepts_arbitrary_center()
                      ? engine::ExpansionPlan::Freezing::diagonal
                      : engine::ExpansionPlan::Freezing::fixed;
  plan.time_integration = preset.field.time_homogeneous()
                              ? engine::ExpansionPlan::TimeIntegration::exact_time_homogeneous
                              : engine::ExpansionPlan::TimeIntegration::quadrature;
  plan.gh_order = effective_gh_order(cfg);
  return engine::Engine(preset.field, plan);
}

RunResult run_price(const ExperimentConfig& cfg) {
  cfg.validate();
  Timer timer;
  const Preset preset = make_preset(cfg.preset);
  const Eigen::VectorXd x = point_or_default(cfg.x, preset.x0, "x");
  const auto payoff_spec = payoff_for(cfg, preset);
  const auto payoff = payoff_spec.function();
  const auto quad = quad_for(payoff_spec, preset.field.dim());

  RunResult result;
  result.table.header = {"N", "t", "x", "T", "value", "per_order", "oracle", "abs_error"};
  for (double tau : cfg.horizons) {
    const double T = cfg.t + tau;
    const OracleValue ref = oracle_price(cfg, preset, payoff, cfg.t, x, T);
    for (int n = 0; n <= cfg.N; ++n) {
      const auto engine = make_engine(preset, cfg, n);
      const auto sol = engine.solve(payoff, cfg.t, x, T, quad ? &*quad : nullptr);
      std::string per_order;
      for (std::size_t i = 0; i < sol.per_order.size(); ++i) {
        if (i) per_order += ";";
        per_order += fmt(sol.per_order[i]);
      }
      result.table.rows.push_back({std::to_string(n), fmt(cfg.t), fmt_vec(x), fmt(T),
                                   fmt(sol.value), per_order, fmt(ref.value),
                                   fmt(std::abs(sol.value - ref.value))});
    }
  }
  auto meta = base_metadata(cfg, "price");
  meta["timings_ms"]["total"] = timer.ms();
  result.metadata_json = meta.dump(2);
  return result;
}

RunResult run_convergence(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.horizons.size() < 4)
    throw ConfigError("[experiment] horizons: convergence sweeps need >= 4 values");
  Timer timer;
  const Preset preset = make_preset(cfg.preset);
  const Eigen::VectorXd x = point_or_default(cfg.x, preset.x0, "x");
  const auto payoff_spec = payoff_for(cfg, preset);
  const auto payoff = payoff_spec.function();
  const auto quad = quad_for(payoff_spec, preset.field.dim());

  RunResult result;
  result.table.header = {"N",     "k",     "tau",   "error",         "oracle_error",
                         "floor", "slope", "slope_residual"};
  for (int n = 0; n <= cfg.N; ++n) {
    const auto engine = make_engine(preset, cfg, n);
    std::vector<double> errs, oerrs;
    std::vector<char> floor;
    for (double tau : cfg.horizons) {
      const double T = cfg.t + tau;
      const OracleValue ref = oracle_price(cfg, preset, payoff, cfg.t, x, T);
      const double err =
          std::abs(engine.solve(payoff, cfg.t, x, T, quad ? &*quad : nullptr).value - ref.value);
      errs.push_back(err);
      oerrs.push_back(ref.error);
      floor.push_back(err < 10.0 * ref.error ? 1 : 0);
    }
    const SlopeFit fit = fit_loglog(cfg.horizons, errs, floor);
    for (std::size_t i = 0; i < cfg.horizons.size(); ++i) {
      result.table.rows.push_back({std::to_string(n), std::to_string(cfg.k),
                                   fmt(cfg.horizons[i]), fmt(errs[i]), fmt(oerrs[i]),
                                   floor[i] ? "1" : "0",
                                   fit.degenerate ? "nan" : fmt(fit.slope),
                                   fit.degenerate ? "nan" : fmt(fit.residual)});
    }
  }
  auto meta = base_metadata(cfg, "convergence");
  meta["timings_ms"]["total"] = timer.ms();
  result.metadata_json = meta.dump(2);
  return result;
}

RunResult run_bootstrap(const ExperimentConfig& cfg) {
  cfg.validate(/*bootstrap_run=*/true);
  Timer timer;
  const Preset preset = make_preset(cfg.preset);
  if (preset.field.dim() != 1)
    throw ConfigError("[experiment] bootstrap sweeps support d = 1 models");
  const Eigen::VectorXd x = point_or_default(cfg.x, preset.x0, "x");
  const auto payoff = payoff_for(cfg, preset).function();
  std::vector<int> ms = cfg.m_values;
  if (ms.empty()) ms = {1, 2, 4, 8};
  const double tau = cfg.horizons.front();
  const double T = cfg.t + tau;

  const auto engine = make_engine(preset, cfg, cfg.N);
  const OracleValue ref = oracle_price(cfg, preset, payoff, cfg.t, x, T);

  // Grid sized so that every intermediate quadrature excursion from a
  // boundary node stays within the solver's extrapolation margin (20% of the
  // span): the worst case is the m = 2 step at the largest volatility seen
  // anywhere on the grid.
  const double sig =
      std::sqrt(2.0 * preset.field.symbol_matrix(cfg.t, x)(0, 0) * tau);
  double a2_max = 0;
  for (int i = 0; i <= 40; ++i) {
    Eigen::VectorXd xi(1);
    xi(0) = x(0) + sig * (-25.0 + 50.0 * i / 40.0);
    a2_max = std::max(a2_max, preset.field.symbol_matrix(cfg.t, xi)(0, 0));
  }
  const double step_sig = std::sqrt(a2_max * tau);
  const double half = std::max(10.0 * sig, 2.5 * std::numbers::sqrt2 * 6.0 * step_sig);
  std::vector<double> grid(static_cast<std::size_t>(cfg.bootstrap_nodes));
  const double lo = x(0) - half, hi = x(0) + half;
  for (int i = 0; i < cfg.bootstrap_nodes; ++i)
    grid[static_cast<std::size_t>(i)] =
        lo + (hi - lo) * i / (cfg.bootstrap_nodes - 1);
  const std::size_t center = static_cast<std::size_t>((cfg.bootstrap_nodes - 1) / 2);

  std::vector<double> inv_m, errs;
  std::vector<char> floor;
  for (int m : ms) {
    const auto values = engine.bootstrap_solve(payoff, cfg.t, grid, T, m, cfg.threads);
    const double err = std::abs(values[center] - ref.value);
    inv_m.push_back(1.0 / m);
    errs.push_back(err);
    floor.push_back(err < 10.0 * ref.error ? 1 : 0);
  }
  const SlopeFit fit = fit_loglog(inv_m, errs, floor);

  RunResult result;
  result.table.header = {"N", "k", "m", "error", "oracle_error", "floor", "slope"};
  for (std::size_t i = 0; i < ms.size(); ++i) {
    result.table.rows.push_back({std::to_string(cfg.N), std::to_string(cfg.k),
                                 std::to_string(ms[i]), fmt(errs[i]), fmt(ref.error),
                                 floor[i] ? "1" : "0",
                                 fit.degenerate ? "nan" : fmt(fit.slope)});
  }
  auto meta = base_metadata(cfg, "bootstrap");
  meta["timings_ms"]["total"] = timer.ms();
  result.metadata_json = meta.dump(2);
  return result;
}

RunResult run_density(const ExperimentConfig& cfg) {
  cfg.validate();
  Timer timer;
  const Preset preset = make_preset(cfg.preset);
  if (preset.field.dim() != 1)
    throw ConfigError("[experiment] density runs support d = 1 models");
  const Eigen::VectorXd x0 = point_or_default(cfg.x, preset.x0, "x");
  const int L = cfg.density_lattice;
  if (L < 2) throw ConfigError("[experiment] density_lattice: need >= 2");

  // bound-kernel constant: max symbol over the lattice box, with headroom
  RunResult result;
  result.table.header = {"x", "y", "tau", "approx", "oracle", "bound_ratio"};
  for (double tau : cfg.horizons) {
    const double T = cfg.t + tau;
    const double sig = std::sqrt(2.0 * preset.field.symbol_matrix(cfg.t, x0)(0, 0) * tau);
    double Mhat = 0;
    Eigen::VectorXd x(1), y(1);
    for (int i = 0; i < L; ++i) {
      x(0) = x0(0) + sig * (-2.0 + 4.0 * i / (L - 1));
      Mhat = std::max(Mhat, preset.field.symbol_matrix(cfg.t, x)(0, 0));
    }
    Mhat *= 1.1;

    const auto engine = make_engine(preset, cfg, cfg.N);
    const auto grid =
        oracles::GridSpec::automatic(preset.field, cfg.t, T, x0, cfg.fd_nodes, cfg.fd_steps);
    for (int i = 0; i < L; ++i) {
      x(0) = x0(0) + sig * (-2.0 + 4.0 * i / (L - 1));
      for (int j = 0; j < L; ++j) {
        y(0) = x0(0) + sig * (-2.0 + 4.0 * j / (L - 1));
        const double approx = engine.fundamental_solution(cfg.t, x, T, y);
        double oracle;
        if (preset.constant) {
          const double var = 2.0 * preset.constant->a2 * tau;
          const double mu = x(0) + preset.constant->a1 * tau;
          oracle = std::exp(preset.constant->a0 * tau) *
                   oracles::norm_pdf((y(0) - mu) / std::sqrt(var)) / std::sqrt(var);
        } else {
          oracle = oracles::fd_density_richardson(preset.field, cfg.t, x, T, y, grid).value;
        }
        const double bound = gaussian::heat_kernel_bound(Mhat, 1, cfg.t, x, T, y);
        result.table.rows.push_back({fmt(x(0)), fmt(y(0)), fmt(tau), fmt(approx), fmt(oracle),
                                     fmt(std::abs(approx - oracle) / bound)});
      }
    }
  }
  auto meta = base_metadata(cfg, "density");
  meta["timings_ms"]["total"] = timer.ms();
  result.metadata_json = meta.dump(2);
  return result;
}

void write_outputs(const RunResult& result, const std::string& out_path) {
  std::ofstream csv(out_path);
  if (!csv) throw ConfigError("cannot write output file: " + out_path);
  result.table.write_csv(csv);
  std::ofstream meta(out_path + ".meta.json");
  if (!meta) throw ConfigError("cannot write metadata file: " + out_path + ".meta.json");
  meta << result.metadata_json << "\n";
}

}  // namespace parex::lab
