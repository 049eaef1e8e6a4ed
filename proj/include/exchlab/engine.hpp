#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "exchlab/generators.hpp"
#include "exchlab/gof.hpp"
#include "exchlab/hypothesis_checks.hpp"
#include "exchlab/rng.hpp"
#include "exchlab/statistics.hpp"

// Monte Carlo execution over the (generator x statistic x m-schedule) grid.
// Replicates are the unit of parallelism; every replicate draws from its own
// derived stream and writes into its own slot, and all reductions run over
// replicate index, so reported numbers are independent of the thread count.

namespace exchlab::engine {

using rng::derive_stream;

struct OutputFlags {
  bool write_samples = false;
  bool write_reports = true;
};

struct ExperimentSpec {
  std::string name;
  GeneratorSpec generator;
  ScheduleSpec schedule;
  StatisticKind statistic;
  std::uint64_t n_rep = 10000;
  std::uint64_t master_seed = 0;
  std::vector<double> epsilons{0.05, 0.1, 0.5};
  OutputFlags outputs;
  unsigned threads = 0;  // 0: hardware concurrency; a hint, never results

  // Full config-level validation (n_rep >= 100, k(m) < m for weber, ...).
  void validate() const;
};

struct CellResult {
  std::uint64_t m = 0;
  gof::StatisticSample sample;
  checks::ConditionReport conditions;
  gof::GofReport gof;
  double wall_seconds = 0.0;
};

struct ExperimentReport {
  ExperimentSpec spec;
  std::vector<CellResult> cells;  // one per scheduled m, in schedule order
  std::string version;
};

// Runs one (m) cell: n_rep rows for the statistic sample and condition
// estimates plus n_rep independent rows for the sign-flip probe. Any m is
// accepted (the joint probe works on the even truncation); n_rep >= 1.
CellResult run_cell(const ExperimentSpec& spec, std::uint64_t m);

ExperimentReport run_experiment(const ExperimentSpec& spec);

}  // namespace exchlab::engine
