#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "parex/engine/engine.hpp"
#include "parex/lab/config.hpp"
#include "parex/lab/presets.hpp"

namespace parex::lab {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void write_csv(std::ostream& out) const;
};

struct RunResult {
  Table table;
  std::string metadata_json;  // config echo + versions + timings
};

// Least-squares slope of log(err) vs log(h); rows flagged `exclude` (error
// floor) are left out of the fit.
struct SlopeFit {
  double slope = 0;
  double residual = 0;
  int used = 0;
  bool degenerate = false;  // fewer than 2 usable points
};
SlopeFit fit_loglog(const std::vector<double>& h, const std::vector<double>& err,
                    const std::vector<char>& exclude);

// Reference value with its own error estimate, from the configured oracle.
struct OracleValue {
  double value = 0;
  double error = 0;
};
OracleValue oracle_price(const ExperimentConfig& cfg, const Preset& preset,
                         const gaussian::Payoff& payoff, double t, const Eigen::VectorXd& x,
                         double T);

engine::Engine make_engine(const Preset& preset, const ExperimentConfig& cfg, int order);

RunResult run_price(const ExperimentConfig& cfg);
RunResult run_convergence(const ExperimentConfig& cfg);
RunResult run_bootstrap(const ExperimentConfig& cfg);
RunResult run_density(const ExperimentConfig& cfg);

// CSV to `out_path`, metadata sidecar to `out_path + ".meta.json"`.
void write_outputs(const RunResult& result, const std::string& out_path);

}  // namespace parex::lab
