#include "exchlab/gof.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "exchlab/kernels.hpp"
#include "kernels_impl.hpp"

namespace exchlab::gof {

namespace {

[[noreturn]] void fail(const std::string& msg) {
  throw std::invalid_argument(msg);
}

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;

// erfc via the rational Chebyshev approximations of W. J. Cody
// (Math. Comp. 23, 1969; the SPECFUN "calerf" coefficient set),
// accurate to ~1 ulp over the whole double range.
double erfc_cody(double x) {
  static const double A[5] = {3.1611237438705656, 113.864154151050156,
                              377.485237685302021, 3209.37758913846947,
                              0.185777706184603153};
  static const double B[4] = {23.6012909523441209, 244.024637934444173,
                              1282.61652607737228, 2844.23683343917062};
  static const double C[9] = {0.564188496988670089, 8.88314979438837594,
                              66.1191906371416295, 298.635138197400131,
                              881.95222124176909, 1712.04761263407058,
                              2051.07837782607147, 1230.33935479799725,
                              2.15311535474403846e-8};
  static const double D[8] = {15.7449261107098347, 117.693950891312499,
                              537.181101862009858, 1621.38957456669019,
                              3290.79923573345963, 4362.61909014324716,
                              3439.36767414372164, 1230.33935480374942};
  static const double P[6] = {0.305326634961232344, 0.360344899949804439,
                              0.125781726111229246, 0.0160837851487422766,
                              6.58749161529837803e-4, 0.0163153871373020978};
  static const double Q[5] = {2.56852019228982242, 1.87295284992346047,
                              0.527905102951428412, 0.0605183413124413191,
                              0.00233520497626869185};
  constexpr double sqrpi = 0.56418958354775628695;
  constexpr double thresh = 0.46875;
  constexpr double xbig = 26.543;
  constexpr double xsmall = 1.11e-16;

  const double y = std::fabs(x);
  double result;
  if (y <= thresh) {
    // 1 - erf(y) in the central interval
    const double ysq = y > xsmall ? y * y : 0.0;
    double xnum = A[4] * ysq;
    double xden = ysq;
    for (int i = 0; i < 3; ++i) {
      xnum = (xnum + A[i]) * ysq;
      xden = (xden + B[i]) * ysq;
    }
    result = 1.0 - x * (xnum + A[3]) / (xden + B[3]);
    return result;  // sign already handled through x
  }
  if (y <= 4.0) {
    double xnum = C[8] * y;
    double xden = y;
    for (int i = 0; i < 7; ++i) {
      xnum = (xnum + C[i]) * y;
      xden = (xden + D[i]) * y;
    }
    result = (xnum + C[7]) / (xden + D[7]);
    // exp(-y^2) evaluated as exp(-hi^2)*exp(-(y-hi)(y+hi)) to limit the
    // argument rounding error
    const double hi = std::trunc(y * 16.0) / 16.0;
    const double del = (y - hi) * (y + hi);
    result *= std::exp(-hi * hi) * std::exp(-del);
  } else if (y < xbig) {
    const double ysq = 1.0 / (y * y);
    double xnum = P[5] * ysq;
    double xden = ysq;
    for (int i = 0; i < 4; ++i) {
      xnum = (xnum + P[i]) * ysq;
      xden = (xden + Q[i]) * ysq;
    }
    result = ysq * (xnum + P[4]) / (xden + Q[4]);
    result = (sqrpi - result) / y;
    const double hi = std::trunc(y * 16.0) / 16.0;
    const double del = (y - hi) * (y + hi);
    result *= std::exp(-hi * hi) * std::exp(-del);
  } else {
    result = 0.0;
  }
  return x < 0.0 ? 2.0 - result : result;
}

// antiderivative of Phi: integral_{-inf}^{u} Phi = u Phi(u) + phi(u)
double phi_int(double u) {
  return u * standard_normal_cdf(u) + standard_normal_pdf(u);
}

}  // namespace

double standard_normal_cdf(double u) { return 0.5 * erfc_cody(-u * kInvSqrt2); }

double standard_normal_pdf(double u) {
  return kInvSqrt2Pi * std::exp(-0.5 * u * u);
}

double normal_cdf(double x, double sigma2) {
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
    fail("normal_cdf: sigma2 must be positive and finite");
  }
  return standard_normal_cdf(x / std::sqrt(sigma2));
}

double normal_quantile(double p, double sigma2) {
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
    fail("normal_quantile: sigma2 must be positive and finite");
  }
  if (!(p > 0.0 && p < 1.0)) fail("normal_quantile: p must be in (0,1)");
  // bisection on the CDF itself down to the last representable interval
  double lo = -40.0, hi = 40.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (standard_normal_cdf(mid) < p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi) * std::sqrt(sigma2);
}

double ks_statistic(std::span<const double> sample, double sigma2) {
  if (sample.empty()) fail("ks_statistic: empty sample");
  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = double(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = normal_cdf(sorted[i], sigma2);
    d = std::max(d, std::fabs(double(i + 1) / n - f));
    d = std::max(d, std::fabs(double(i) / n - f));
  }
  return d;
}

double ks_statistic(const StatisticSample& sample) {
  return ks_statistic(sample.values, sample.kind.target_sigma2());
}

double wasserstein1(std::span<const double> sample, double sigma2) {
  if (sample.empty()) fail("wasserstein1: empty sample");
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
    fail("wasserstein1: sigma2 must be positive and finite");
  }
  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  const double sigma = std::sqrt(sigma2);
  const double n = double(sorted.size());

  // integral of |F_n - F| piece by piece in standardized coordinates
  long double total = 0.0L;
  const double u_first = sorted.front() / sigma;
  const double u_last = sorted.back() / sigma;
  total += phi_int(u_first);  // left tail: F_n = 0
  // right tail: F_n = 1; integral of (1 - Phi) from u_last
  total += standard_normal_pdf(u_last) -
           u_last * standard_normal_cdf(-u_last);
  for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
    const double a = sorted[i] / sigma;
    const double b = sorted[i + 1] / sigma;
    if (a == b) continue;
    const double q = double(i + 1) / n;
    const double fa = standard_normal_cdf(a);
    const double fb = standard_normal_cdf(b);
    if (q <= fa) {
      total += (phi_int(b) - phi_int(a)) - q * (b - a);
    } else if (q >= fb) {
      total += q * (b - a) - (phi_int(b) - phi_int(a));
    } else {
      const double u = normal_quantile(q, 1.0);
      total += q * (u - a) - (phi_int(u) - phi_int(a));
      total += (phi_int(b) - phi_int(u)) - q * (b - u);
    }
  }
  return double(total) * sigma;
}

double wasserstein1(const StatisticSample& sample) {
  return wasserstein1(sample.values, sample.kind.target_sigma2());
}

std::pair<double, double> summarize(std::span<const double> sample) {
  if (sample.size() < 2) {
    fail("summarize: need at least 2 values for the variance");
  }
  const double mean = kernels::sum(sample) / double(sample.size());
  double s = 0.0, c = 0.0;
  for (double x : sample) {
    const double d = x - mean;
    kernels::detail::two_sum_add(s, c, d * d);
  }
  return {mean, (s + c) / double(sample.size() - 1)};
}

GofReport evaluate_gof(const StatisticSample& sample) {
  if (sample.values.empty()) fail("evaluate_gof: empty sample");
  GofReport r;
  r.target_sigma2 = sample.kind.target_sigma2();
  r.ks = ks_statistic(sample.values, r.target_sigma2);
  r.wasserstein1 = wasserstein1(sample.values, r.target_sigma2);
  if (sample.values.size() >= 2) {
    auto [mean, var] = summarize(sample.values);
    r.sample_mean = mean;
    r.sample_var = var;
  } else {
    r.sample_mean = sample.values.front();
    r.sample_var = std::numeric_limits<double>::quiet_NaN();
  }
  return r;
}

}  // namespace exchlab::gof
