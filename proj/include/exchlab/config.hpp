#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "exchlab/engine.hpp"

// Config file handling. The experiment file is JSON (see README for the
// grammar); every experiment maps to one engine::ExperimentSpec with
// defaults filled (n_rep 10000, epsilons {0.05, 0.1, 0.5}).

namespace exchlab::cli {

// Raised for malformed or invalid config input; the CLI maps it to exit 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Config {
  std::uint64_t master_seed = 0;
  std::string out_dir = "out";
  unsigned threads = 0;
  std::vector<engine::ExperimentSpec> experiments;
};

Config parse_config(const std::string& path);

// Same parser on an in-memory document; `origin` labels error messages.
Config parse_config_text(const std::string& text, const std::string& origin);

}  // namespace exchlab::cli
