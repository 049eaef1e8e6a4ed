#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "exchlab/statistics.hpp"

// Normal-target goodness of fit: an exact N(0, sigma^2) CDF (rational
// Chebyshev error-function approximation, absolute error well below 1e-10),
// its inverse obtained by bisection + Newton on the CDF itself, and the
// KS / Wasserstein-1 distances between an empirical sample and the target.

namespace exchlab::gof {

// Phi(x / sqrt(sigma2)); sigma2 > 0 or std::invalid_argument.
double normal_cdf(double x, double sigma2);

// CDF of N(0,1).
double standard_normal_cdf(double u);

// Standard normal density.
double standard_normal_pdf(double u);

// Inverse of normal_cdf in x for p in (0,1); |Phi(Q(p)/sigma) - p| <= 1e-12
// in the central range. p = 0 or 1 is rejected.
double normal_quantile(double p, double sigma2);

// Monte Carlo sample of one statistic at fixed m.
struct StatisticSample {
  StatisticKind kind;
  std::uint64_t m = 0;
  std::vector<double> values;
  std::uint64_t seed = 0;

  std::uint64_t n_rep() const { return values.size(); }
};

struct GofReport {
  double ks = 0.0;
  double wasserstein1 = 0.0;
  double sample_mean = 0.0;
  double sample_var = 0.0;  // NaN when n_rep < 2
  double target_sigma2 = 1.0;
};

// sup_x |F_n(x) - F(x)| against N(0, sigma2); sorts a private copy.
double ks_statistic(std::span<const double> sample, double sigma2);
double ks_statistic(const StatisticSample& sample);

// Integral of |F_n - F| (the exact L1 distance between the empirical CDF
// and the target), evaluated in closed form segment by segment.
double wasserstein1(std::span<const double> sample, double sigma2);
double wasserstein1(const StatisticSample& sample);

// Mean and unbiased variance, compensated two-pass; n_rep >= 2 required.
std::pair<double, double> summarize(std::span<const double> sample);

GofReport evaluate_gof(const StatisticSample& sample);

}  // namespace exchlab::gof
