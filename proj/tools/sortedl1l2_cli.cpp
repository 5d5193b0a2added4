#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "sortedl1l2/baselines.hpp"
#include "sortedl1l2/config.hpp"
#include "sortedl1l2/errors.hpp"
#include "sortedl1l2/experiments.hpp"

namespace {

using namespace sortedl1l2;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::size_t> threads;
  std::optional<std::size_t> trials;
  std::string solvers;
  std::vector<std::string> sets;
  bool no_timing = false;
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

ExperimentConfig build_config(ExperimentKind kind, const CommonFlags& f) {
  ExperimentConfig cfg = f.config.empty() ? ExperimentConfig::defaults_for(kind) : load_config_file(f.config, kind);
  if (cfg.kind != kind) throw ConfigError("config file selects a different experiment than the subcommand");
  for (const auto& kv : f.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (f.seed) cfg.seed = *f.seed;
  if (f.out) cfg.out = *f.out;
  if (f.threads) cfg.threads = *f.threads;
  if (f.trials) cfg.trials = *f.trials;
  if (!f.solvers.empty()) {
    cfg.solvers = split_list(f.solvers);
    for (const auto& s : cfg.solvers)
      if (!is_known_solver(s)) throw ConfigError("unknown solver '" + s + "'");
  }
  if (f.no_timing) cfg.timing = false;
  cfg.validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse recovery with the sorted L1/L2 penalty: experiment driver"};
  app.require_subcommand(1);

  CommonFlags flags;
  const std::vector<std::pair<std::string, ExperimentKind>> commands{
      {"toy", ExperimentKind::toy},
      {"phase", ExperimentKind::phase},
      {"noisy-table", ExperimentKind::noisy_table},
      {"support", ExperimentKind::support},
      {"convergence", ExperimentKind::convergence},
  };
  std::vector<std::pair<CLI::App*, ExperimentKind>> subs;
  for (const auto& [name, kind] : commands) {
    CLI::App* sub = app.add_subcommand(name, "run the " + name + " experiment");
    sub->add_option("--config", flags.config, "key = value config file")->check(CLI::ExistingFile);
    sub->add_option("--seed", flags.seed, "base seed");
    sub->add_option("--out", flags.out, "output directory");
    sub->add_option("--threads", flags.threads, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--trials", flags.trials, "trials per cell")->check(CLI::PositiveNumber);
    sub->add_option("--solver", flags.solvers, "comma separated solver list");
    sub->add_option("--set", flags.sets, "override one config key (key=value, JSON value)");
    sub->add_flag("--no-timing", flags.no_timing, "write 0 for wall-clock columns");
    subs.emplace_back(sub, kind);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    for (const auto& [sub, kind] : subs) {
      if (!sub->parsed()) continue;
      const ExperimentConfig cfg = build_config(kind, flags);
      const auto tables = run_experiment(cfg);
      write_tables(cfg.out, cfg, tables);
      for (const auto& [file, table] : tables)
        std::cout << cfg.out << '/' << file << " (" << table.rows.size() << " rows)\n";
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ContractViolation& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitOk;
}
