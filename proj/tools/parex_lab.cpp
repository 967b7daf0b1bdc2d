#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "parex/lab/experiments.hpp"

namespace {

struct GlobalFlags {
  std::string config_path;
  std::string out_path = "out.csv";
  std::optional<int> threads;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> oracle;
  bool quiet = false;
};

void add_common(CLI::App* cmd, GlobalFlags& flags, bool needs_config) {
  auto* cfg = cmd->add_option("--config", flags.config_path, "experiment config file");
  if (needs_config) cfg->required();
  cmd->add_option("--out", flags.out_path, "output CSV path (metadata sidecar alongside)");
  cmd->add_option("--threads", flags.threads, "worker threads (0 = all)");
  cmd->add_option("--seed", flags.seed, "RNG seed override");
  cmd->add_option("--oracle", flags.oracle, "reference oracle: fd, mc or exact")
      ->check(CLI::IsMember({"fd", "mc", "exact"}));
  cmd->add_flag("--quiet", flags.quiet, "suppress progress output");
}

parex::lab::ExperimentConfig load_config(const GlobalFlags& flags) {
  auto ini = parex::lab::IniFile::parse_file(flags.config_path);
  auto cfg = parex::lab::ExperimentConfig::from_ini(ini);
  if (flags.threads) cfg.threads = *flags.threads;
  if (flags.seed) cfg.seed = *flags.seed;
  if (flags.oracle) cfg.oracle = *flags.oracle;
  return cfg;
}

int run_command(const GlobalFlags& flags,
                parex::lab::RunResult (*runner)(const parex::lab::ExperimentConfig&),
                const char* name) {
  const auto cfg = load_config(flags);
  if (!flags.quiet)
    std::cerr << name << ": preset=" << cfg.preset << " scheme=" << cfg.scheme_kind
              << " N=" << cfg.N << " oracle=" << cfg.oracle << "\n";
  const auto result = runner(cfg);
  parex::lab::write_outputs(result, flags.out_path);
  if (!flags.quiet)
    std::cerr << name << ": wrote " << result.table.rows.size() << " rows to " << flags.out_path
              << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"asymptotic-expansion pricing lab"};
  app.require_subcommand(1);

  GlobalFlags flags;
  auto* price = app.add_subcommand("price", "price at fixed settings with per-order breakdown");
  auto* density = app.add_subcommand("density", "fundamental-solution lattice comparison");
  auto* convergence = app.add_subcommand("convergence", "horizon sweep with log-log slope fit");
  auto* bootstrap = app.add_subcommand("bootstrap", "multi-step scheme sweep over step counts");
  auto* list_presets = app.add_subcommand("list-presets", "list registered model presets");
  auto* validate = app.add_subcommand("validate-config", "parse and validate a config file");
  for (auto* cmd : {price, density, convergence, bootstrap}) add_common(cmd, flags, true);
  add_common(validate, flags, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (list_presets->parsed()) {
      for (const auto& name : parex::lab::preset_names()) {
        const auto p = parex::lab::make_preset(name);
        std::cout << name << " (d=" << p.field.dim() << "): " << p.description << "\n";
      }
      return 0;
    }
    if (validate->parsed()) {
      const auto cfg = load_config(flags);
      cfg.validate(!cfg.m_values.empty());
      parex::lab::make_preset(cfg.preset);  // resolves the model too
      if (!flags.quiet) std::cout << "config ok: " << flags.config_path << "\n";
      return 0;
    }
    if (price->parsed()) return run_command(flags, parex::lab::run_price, "price");
    if (density->parsed()) return run_command(flags, parex::lab::run_density, "density");
    if (convergence->parsed())
      return run_command(flags, parex::lab::run_convergence, "convergence");
    if (bootstrap->parsed()) return run_command(flags, parex::lab::run_bootstrap, "bootstrap");
  } catch (const parex::lab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
