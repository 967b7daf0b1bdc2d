#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "parex/oracles/exact.hpp"

namespace parex::lab {

// Config or CLI usage problem: maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Flat `key = value` file with `[section]` headers; `#` and `;` comments.
class IniFile {
 public:
  static IniFile parse_file(const std::string& path);
  static IniFile parse_string(const std::string& text, const std::string& origin = "<string>");

  bool has(const std::string& section, const std::string& key) const;
  std::string get(const std::string& section, const std::string& key,
                  const std::string& fallback) const;
  std::string require(const std::string& section, const std::string& key) const;

  const std::map<std::string, std::map<std::string, std::string>>& sections() const {
    return sections_;
  }

 private:
  std::map<std::string, std::map<std::string, std::string>> sections_;
};

struct ExperimentConfig {
  // [model]
  std::string preset = "tanh_localvol";

  // [scheme]
  std::string scheme_kind = "taylor";  // taylor | enhanced_taylor | time_taylor | hermite
  int N = 1;
  std::vector<int> enhanced_M;        // enhanced_taylor grouping, defaults to 1..N
  double hermite_weight_scale = 1.0;  // weight covariance = scale * leading covariance

  // [payoff]
  oracles::PayoffSpec payoff;
  int k = 1;  // declared smoothness class, in {0, 1, 2}
  bool payoff_from_config = false;

  // [experiment]
  double t = 0.0;
  std::vector<double> x;  // evaluation point; empty = preset default
  std::vector<double> y;  // density target; empty = preset default
  std::vector<double> horizons = {0.25};
  std::vector<int> m_values;  // bootstrap sweep
  std::string oracle = "fd";  // fd | mc | exact
  double slope_tol = 0.3;
  int density_lattice = 9;

  // [numerics]
  int gh_order = 0;  // 0 = pick by payoff smoothness (60 non-smooth, 20 smooth)
  int fd_nodes = 801;
  int fd_steps = 400;
  std::int64_t mc_paths = 200000;
  int mc_steps = 100;
  int bootstrap_nodes = 281;
  std::uint64_t seed = 1;
  int threads = 0;

  static ExperimentConfig from_ini(const IniFile& ini);
  void validate(bool bootstrap_run = false) const;  // throws ConfigError
};

}  // namespace parex::lab
