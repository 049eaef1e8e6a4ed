#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "exchlab/generators.hpp"

// Monte Carlo estimators for the three hypothesis conditions (pairwise
// correlation, max-coordinate exceedance, quadratic concentration) and the
// two symmetry probes. Every estimator is a pure function of
// (spec, m, parameters, master_seed): rows come from the same
// derive_stream(seed, m, replicate) discipline the engine uses, so an
// engine cell and a standalone call agree number for number.

namespace exchlab::checks {

struct Estimate {
  double value = 0.0;
  double ci_half_width = 0.0;  // 95% normal-approximation CI
  std::uint64_t n_rep = 0;
};

// Mean of per-replicate values with its 95% CI half-width (0 when n < 2).
Estimate mean_estimate(std::span<const double> per_replicate);

// Mean of X_i X_j averaged over the floor(m/2) disjoint coordinate pairs of
// each row (justified by exchangeability; reduces the CI width only).
// Requires m >= 2 and n_rep >= 2.
Estimate estimate_pair_correlation(const GeneratorSpec& spec, std::uint64_t m,
                                   std::uint64_t n_rep,
                                   std::uint64_t master_seed);

// P(max_i |X_i| / sqrt(m) > eps); eps > 0.
double estimate_max_exceedance(const GeneratorSpec& spec, std::uint64_t m,
                               double eps, std::uint64_t n_rep,
                               std::uint64_t master_seed);

enum class QuadVariant { lemma_k, theorem_m };

std::string_view quad_variant_name(QuadVariant v);

// P(|(1/d) sum_{i<=d} X_i^2 - 1| > eps) with d = k (lemma_k) or m
// (theorem_m); requires 1 <= k <= m.
double estimate_quadratic_concentration(const GeneratorSpec& spec,
                                        std::uint64_t m, std::uint64_t k,
                                        double eps, QuadVariant variant,
                                        std::uint64_t n_rep,
                                        std::uint64_t master_seed);

// Two-sample KS distance between the coordinate-1 sample and its negation;
// n_rep >= 100.
double marginal_symmetry_distance(const GeneratorSpec& spec, std::uint64_t m,
                                  std::uint64_t n_rep,
                                  std::uint64_t master_seed);

// Two-sample KS distance between {full_sum(row)} over replicates
// [0, n_rep) and {full_sum(sign_flip_tail(row, m/2))} over the independent
// replicates [n_rep, 2 n_rep); m even, n_rep >= 100.
double joint_sign_symmetry_distance(const GeneratorSpec& spec, std::uint64_t m,
                                    std::uint64_t n_rep,
                                    std::uint64_t master_seed);

// sup |F_a - F_b| between two empirical CDFs (sorts private copies).
double two_sample_ks(std::span<const double> a, std::span<const double> b);

// Smirnov critical value c(alpha) * sqrt((n_a + n_b) / (n_a n_b)) at
// alpha in {0.10, 0.05, 0.01, 0.001}.
double two_sample_ks_critical(std::uint64_t n_a, std::uint64_t n_b,
                              double alpha);

// Per-(m, eps) condition quantities of one Monte Carlo cell.
struct ConditionReport {
  std::uint64_t m = 0;
  std::uint64_t n_rep = 0;
  Estimate pair_corr;
  std::vector<double> epsilons;
  std::vector<double> max_exceedance_prob;      // one entry per epsilon
  std::vector<double> quad_concentration_prob;  // one entry per epsilon
  QuadVariant quad_variant = QuadVariant::theorem_m;
  double marginal_symmetry_ks = 0.0;
  double joint_sign_symmetry_ks = 0.0;
  std::uint64_t symmetry_n = 0;  // per-sample size of the two KS probes
};

// Fixed finite-threshold verdicts discretizing the asymptotic conditions:
//   cond1: |pair corr| within the 95% CI of 0, or below the smallest eps
//   cond2: exceedance probability <= 0.01 at every eps >= cond2_verdict_eps
//   cond3: concentration probability <= 0.01 at every eps
//   symmetry probes: below the 99% two-sample KS critical value
struct ConditionVerdicts {
  bool cond1 = false;
  bool cond2 = false;
  bool cond3 = false;
  bool marginal_symmetry = false;
  bool joint_sign_symmetry = false;
};

inline constexpr double kVerdictProb = 0.01;
inline constexpr double kCond2VerdictEps = 0.1;

ConditionVerdicts condition_verdicts(const ConditionReport& report);

}  // namespace exchlab::checks
