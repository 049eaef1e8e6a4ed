#include "exchlab/hypothesis_checks.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "exchlab/kernels.hpp"
#include "exchlab/statistics.hpp"

namespace exchlab::checks {

namespace {

[[noreturn]] void fail(const std::string& msg) {
  throw std::invalid_argument(msg);
}

}  // namespace

Estimate mean_estimate(std::span<const double> per_replicate) {
  Estimate e;
  e.n_rep = per_replicate.size();
  e.value = kernels::sum(per_replicate) / double(per_replicate.size());
  if (per_replicate.size() >= 2) {
    double ss = 0.0;
    for (double v : per_replicate) {
      const double d = v - e.value;
      ss += d * d;
    }
    const double n = double(per_replicate.size());
    e.ci_half_width = 1.959963984540054 * std::sqrt(ss / (n - 1.0) / n);
  }
  return e;
}

std::string_view quad_variant_name(QuadVariant v) {
  return v == QuadVariant::lemma_k ? "lemma_k" : "theorem_m";
}

Estimate estimate_pair_correlation(const GeneratorSpec& spec, std::uint64_t m,
                                   std::uint64_t n_rep,
                                   std::uint64_t master_seed) {
  if (m < 2) fail("estimate_pair_correlation: m must be >= 2");
  if (n_rep < 2) fail("estimate_pair_correlation: n_rep must be >= 2 (no CI)");
  const RowSource source(spec, master_seed, m);
  const double pairs = double(m / 2);
  std::vector<double> per_row(n_rep);
  ArrayRow row;
  for (std::uint64_t r = 0; r < n_rep; ++r) {
    auto stream = rng::derive_stream(master_seed, m, r);
    source.generate_into(row, stream);
    per_row[r] = kernels::paired_product_sum(row.span()) / pairs;
  }
  return mean_estimate(per_row);
}

double estimate_max_exceedance(const GeneratorSpec& spec, std::uint64_t m,
                               double eps, std::uint64_t n_rep,
                               std::uint64_t master_seed) {
  if (!(eps > 0.0)) fail("estimate_max_exceedance: eps must be > 0");
  if (n_rep < 1) fail("estimate_max_exceedance: n_rep must be >= 1");
  const RowSource source(spec, master_seed, m);
  const double root_m = std::sqrt(double(m));
  std::uint64_t exceed = 0;
  ArrayRow row;
  for (std::uint64_t r = 0; r < n_rep; ++r) {
    auto stream = rng::derive_stream(master_seed, m, r);
    source.generate_into(row, stream);
    if (kernels::max_abs(row.span()) / root_m > eps) ++exceed;
  }
  return double(exceed) / double(n_rep);
}

double estimate_quadratic_concentration(const GeneratorSpec& spec,
                                        std::uint64_t m, std::uint64_t k,
                                        double eps, QuadVariant variant,
                                        std::uint64_t n_rep,
                                        std::uint64_t master_seed) {
  if (k < 1 || k > m) {
    fail("estimate_quadratic_concentration: k must satisfy 1 <= k <= m");
  }
  if (!(eps > 0.0)) fail("estimate_quadratic_concentration: eps must be > 0");
  if (n_rep < 1) fail("estimate_quadratic_concentration: n_rep must be >= 1");
  const RowSource source(spec, master_seed, m);
  const std::uint64_t divisor = variant == QuadVariant::lemma_k ? k : m;
  std::uint64_t exceed = 0;
  ArrayRow row;
  for (std::uint64_t r = 0; r < n_rep; ++r) {
    auto stream = rng::derive_stream(master_seed, m, r);
    source.generate_into(row, stream);
    const double q =
        kernels::sum_squares(row.span().first(divisor)) / double(divisor);
    if (std::fabs(q - 1.0) > eps) ++exceed;
  }
  return double(exceed) / double(n_rep);
}

double marginal_symmetry_distance(const GeneratorSpec& spec, std::uint64_t m,
                                  std::uint64_t n_rep,
                                  std::uint64_t master_seed) {
  if (n_rep < 100) fail("marginal_symmetry_distance: n_rep must be >= 100");
  const RowSource source(spec, master_seed, m);
  std::vector<double> coord(n_rep), negated(n_rep);
  ArrayRow row;
  for (std::uint64_t r = 0; r < n_rep; ++r) {
    auto stream = rng::derive_stream(master_seed, m, r);
    source.generate_into(row, stream);
    coord[r] = row.values.front();
    negated[r] = -coord[r];
  }
  return two_sample_ks(coord, negated);
}

double joint_sign_symmetry_distance(const GeneratorSpec& spec, std::uint64_t m,
                                    std::uint64_t n_rep,
                                    std::uint64_t master_seed) {
  if (m < 2 || m % 2 != 0) {
    fail("joint_sign_symmetry_distance: m must be even and >= 2");
  }
  if (n_rep < 100) fail("joint_sign_symmetry_distance: n_rep must be >= 100");
  const RowSource source(spec, master_seed, m);
  std::vector<double> base(n_rep), flipped(n_rep);
  ArrayRow row;
  for (std::uint64_t r = 0; r < n_rep; ++r) {
    auto stream = rng::derive_stream(master_seed, m, r);
    source.generate_into(row, stream);
    base[r] = full_sum_statistic(row);
  }
  for (std::uint64_t r = 0; r < n_rep; ++r) {
    auto stream = rng::derive_stream(master_seed, m, n_rep + r);
    source.generate_into(row, stream);
    flipped[r] = full_sum_statistic(sign_flip_tail(row, m / 2));
  }
  return two_sample_ks(base, flipped);
}

double two_sample_ks(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) fail("two_sample_ks: empty sample");
  std::vector<double> sa(a.begin(), a.end()), sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  const double na = double(sa.size()), nb = double(sb.size());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < sa.size() && j < sb.size()) {
    const double x = std::min(sa[i], sb[j]);
    while (i < sa.size() && sa[i] <= x) ++i;
    while (j < sb.size() && sb[j] <= x) ++j;
    d = std::max(d, std::fabs(double(i) / na - double(j) / nb));
  }
  return d;
}

double two_sample_ks_critical(std::uint64_t n_a, std::uint64_t n_b,
                              double alpha) {
  // c(alpha) = sqrt(-ln(alpha/2) / 2)
  double c;
  if (alpha == 0.10) {
    c = 1.22385;
  } else if (alpha == 0.05) {
    c = 1.35810;
  } else if (alpha == 0.01) {
    c = 1.62762;
  } else if (alpha == 0.001) {
    c = 1.94947;
  } else {
    c = std::sqrt(-0.5 * std::log(alpha / 2.0));
  }
  return c * std::sqrt((double(n_a) + double(n_b)) / (double(n_a) * double(n_b)));
}

ConditionVerdicts condition_verdicts(const ConditionReport& report) {
  ConditionVerdicts v;
  const double eps_floor =
      report.epsilons.empty()
          ? 0.0
          : *std::min_element(report.epsilons.begin(), report.epsilons.end());
  v.cond1 = std::fabs(report.pair_corr.value) <=
            std::max(report.pair_corr.ci_half_width, eps_floor);
  v.cond2 = true;
  v.cond3 = true;
  for (std::size_t i = 0; i < report.epsilons.size(); ++i) {
    if (report.epsilons[i] >= kCond2VerdictEps &&
        report.max_exceedance_prob[i] > kVerdictProb) {
      v.cond2 = false;
    }
    if (report.quad_concentration_prob[i] > kVerdictProb) v.cond3 = false;
  }
  const double crit =
      two_sample_ks_critical(report.symmetry_n, report.symmetry_n, 0.01);
  v.marginal_symmetry = report.marginal_symmetry_ks <= crit;
  v.joint_sign_symmetry = report.joint_sign_symmetry_ks <= crit;
  return v;
}

}  // namespace exchlab::checks
