#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "exchlab/config.hpp"

// Batch commands behind the exchlab binary. All three return process exit
// codes: 0 success, 1 a cell or check failed, 2 config error.

namespace exchlab::cli {

// Append-only stable schema of report.csv.
inline constexpr std::string_view kReportHeader =
    "experiment,generator,statistic,gamma,m,n_rep,seed,ks,w1,sample_mean,"
    "sample_var,pair_corr,pair_corr_ci,max_exc_eps,max_exc_prob,quad_var,"
    "quad_eps,quad_prob,marg_sym_ks,joint_sym_ks";

struct Overrides {
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
};

// Shortest round-trip decimal form; NaN renders as the empty field.
std::string format_double(double v);

// Runs every experiment, writes <out_dir>/report.csv and (per experiment
// flag) samples_<name>_<m>.csv.
int cmd_run(const Config& config, const Overrides& overrides);

// Conditions only: same CSV schema with the goodness-of-fit columns left
// empty, plus a PASS/FAIL line per condition at the largest m.
int cmd_check(const Config& config, const Overrides& overrides);

// Verifies the flip identity on standard-normal rows of even sizes up to
// m_max (n_rep rows total); prints the worst residual.
int cmd_identity(std::uint64_t m_max, std::uint64_t n_rep, std::uint64_t seed);

}  // namespace exchlab::cli
