#include "parex/lab/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "parex/lab/presets.hpp"

namespace parex::lab {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& section, const std::string& key, const std::string& text) {
  std::istringstream in(text);
  T v;
  in >> v;
  if (in.fail() || !(in >> std::ws).eof())
    throw ConfigError("[" + section + "] " + key + ": cannot parse '" + text + "'");
  return v;
}

template <class T>
std::vector<T> parse_list(const std::string& section, const std::string& key,
                          const std::string& text) {
  std::vector<T> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(parse_number<T>(section, key, item));
  }
  return out;
}

}  // namespace

IniFile IniFile::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_string(buf.str(), path);
}

IniFile IniFile::parse_string(const std::string& text, const std::string& origin) {
  IniFile f;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto cut = line.find_first_of("#;");
    if (cut != std::string::npos) line = line.substr(0, cut);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError(origin + ":" + std::to_string(lineno) + ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      f.sections_[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
    if (section.empty())
      throw ConfigError(origin + ":" + std::to_string(lineno) +
                        ": key outside any [section]");
    f.sections_[section][key] = value;
  }
  return f;
}

bool IniFile::has(const std::string& section, const std::string& key) const {
  auto s = sections_.find(section);
  return s != sections_.end() && s->second.count(key) > 0;
}

std::string IniFile::get(const std::string& section, const std::string& key,
                         const std::string& fallback) const {
  auto s = sections_.find(section);
  if (s == sections_.end()) return fallback;
  auto k = s->second.find(key);
  return k == s->second.end() ? fallback : k->second;
}

std::string IniFile::require(const std::string& section, const std::string& key) const {
  if (!has(section, key)) throw ConfigError("[" + section + "] missing required key: " + key);
  return get(section, key, "");
}

ExperimentConfig ExperimentConfig::from_ini(const IniFile& ini) {
  ExperimentConfig c;
  auto num = [&](const std::string& s, const std::string& k, auto fallback) {
    using T = decltype(fallback);
    return ini.has(s, k) ? parse_number<T>(s, k, ini.get(s, k, "")) : fallback;
  };
  auto list = [&](const std::string& s, const std::string& k, auto example) {
    using T = decltype(example);
    (void)example;
    return parse_list<T>(s, k, ini.get(s, k, ""));
  };

  c.preset = ini.get("model", "preset", c.preset);

  c.scheme_kind = ini.get("scheme", "kind", c.scheme_kind);
  c.N = num("scheme", "N", c.N);
  if (ini.has("scheme", "M")) c.enhanced_M = list("scheme", "M", int{});
  c.hermite_weight_scale = num("scheme", "hermite_weight_scale", c.hermite_weight_scale);

  if (ini.has("payoff", "kind")) {
    c.payoff_from_config = true;
    const std::string kind = ini.get("payoff", "kind", "call");
    if (kind == "call")
      c.payoff.kind = oracles::PayoffSpec::Kind::call;
    else if (kind == "digital")
      c.payoff.kind = oracles::PayoffSpec::Kind::digital;
    else if (kind == "gaussian_bump")
      c.payoff.kind = oracles::PayoffSpec::Kind::gaussian_bump;
    else
      throw ConfigError("[payoff] kind: unknown payoff '" + kind + "'");
    c.payoff.strike = num("payoff", "strike", 0.0);
    c.payoff.center = num("payoff", "center", 0.0);
    c.payoff.width = num("payoff", "width", 1.0);
    c.k = c.payoff.smoothness();
  }
  c.k = num("payoff", "k", c.k);

  c.t = num("experiment", "t", c.t);
  if (ini.has("experiment", "x")) c.x = list("experiment", "x", double{});
  if (ini.has("experiment", "y")) c.y = list("experiment", "y", double{});
  if (ini.has("experiment", "horizons")) c.horizons = list("experiment", "horizons", double{});
  if (ini.has("experiment", "m_values")) c.m_values = list("experiment", "m_values", int{});
  c.oracle = ini.get("experiment", "oracle", c.oracle);
  c.slope_tol = num("experiment", "slope_tol", c.slope_tol);
  c.density_lattice = num("experiment", "density_lattice", c.density_lattice);

  c.gh_order = num("numerics", "gh_order", c.gh_order);
  c.fd_nodes = num("numerics", "fd_nodes", c.fd_nodes);
  c.fd_steps = num("numerics", "fd_steps", c.fd_steps);
  c.mc_paths = num("numerics", "mc_paths", c.mc_paths);
  c.mc_steps = num("numerics", "mc_steps", c.mc_steps);
  c.bootstrap_nodes = num("numerics", "bootstrap_nodes", c.bootstrap_nodes);
  c.seed = num("numerics", "seed", c.seed);
  c.threads = num("numerics", "threads", c.threads);

  return c;
}

void ExperimentConfig::validate(bool bootstrap_run) const {
  const auto names = preset_names();
  if (std::find(names.begin(), names.end(), preset) == names.end())
    throw ConfigError("[model] preset: unknown preset '" + preset + "'");
  if (k < 0 || k > 2) throw ConfigError("[payoff] k: must be in {0, 1, 2}");
  if (N < 0) throw ConfigError("[scheme] N: must be >= 0");
  if (bootstrap_run || !m_values.empty()) {
    if (N < 1) throw ConfigError("[scheme] N: bootstrap sweeps require N >= 1");
    for (int m : m_values)
      if (m < 1) throw ConfigError("[experiment] m_values: entries must be >= 1");
  }
  static const std::vector<std::string> kinds = {"taylor", "enhanced_taylor", "time_taylor",
                                                 "hermite"};
  if (std::find(kinds.begin(), kinds.end(), scheme_kind) == kinds.end())
    throw ConfigError("[scheme] kind: unknown scheme '" + scheme_kind + "'");
  static const std::vector<std::string> oracles_ = {"fd", "mc", "exact"};
  if (std::find(oracles_.begin(), oracles_.end(), oracle) == oracles_.end())
    throw ConfigError("[experiment] oracle: must be one of fd, mc, exact");
  if (horizons.empty()) throw ConfigError("[experiment] horizons: need at least one value");
  for (double h : horizons)
    if (h <= 0) throw ConfigError("[experiment] horizons: entries must be positive");
  if (gh_order < 0 || fd_nodes < 5 || fd_steps < 1 || mc_paths < 1 || mc_steps < 1 ||
      bootstrap_nodes < 5)
    throw ConfigError("[numerics] invalid quadrature/grid settings");
  if (slope_tol < 0) throw ConfigError("[experiment] slope_tol: must be non-negative");
}

}  // namespace parex::lab
