#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "exchlab/cli.hpp"
#include "exchlab/version.hpp"

// exchlab: config-driven Monte Carlo runs over exchangeable-array
// generators, with CSV reports for plotting and CI assertions.

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo laboratory for exchangeable-array central "
               "limit behaviour"};
  app.set_version_flag("--version", exchlab::kVersion);
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  unsigned threads = 0;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "experiment config file (JSON)")
        ->required();
    cmd->add_option("--out-dir", out_dir, "output directory (overrides config)");
    cmd->add_option("--seed", seed, "master seed (overrides config)");
    cmd->add_option("--threads", threads,
                    "worker thread hint; never changes results");
  };

  auto* run = app.add_subcommand("run", "run experiments, write report.csv");
  add_common(run);
  auto* check =
      app.add_subcommand("check", "run hypothesis-condition checks only");
  add_common(check);

  auto* identity = app.add_subcommand(
      "identity", "verify the sign-flip proof identity on random rows");
  std::uint64_t m_max = 10000;
  std::uint64_t id_n_rep = 10000;
  std::uint64_t id_seed = 1;
  identity->add_option("--m-max", m_max, "largest (even) row size");
  identity->add_option("--n-rep", id_n_rep, "number of rows");
  identity->add_option("--seed", id_seed, "master seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (identity->parsed()) {
    return exchlab::cli::cmd_identity(m_max, id_n_rep, id_seed);
  }

  exchlab::cli::Overrides overrides;
  if (run->count("--out-dir") || check->count("--out-dir")) {
    overrides.out_dir = out_dir;
  }
  if (run->count("--seed") || check->count("--seed")) overrides.seed = seed;
  if (run->count("--threads") || check->count("--threads")) {
    overrides.threads = threads;
  }

  exchlab::cli::Config config;
  try {
    config = exchlab::cli::parse_config(config_path);
  } catch (const exchlab::cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  return run->parsed() ? exchlab::cli::cmd_run(config, overrides)
                       : exchlab::cli::cmd_check(config, overrides);
}
