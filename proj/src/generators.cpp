#include "exchlab/generators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "exchlab/kernels.hpp"

namespace exchlab {

namespace {

constexpr double kNormalizationTol = 1e-9;

void fisher_yates(std::vector<double>& v, rng::Stream& stream) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const std::size_t j = stream.next_below(i);
    std::swap(v[i - 1], v[j]);
  }
}

[[noreturn]] void fail(const std::string& msg) {
  throw std::invalid_argument(msg);
}

// Unchecked fills; the public ops and RowSource validate parameters first.

void fill_iid(IidDist dist, std::uint64_t m, rng::Stream& stream,
              std::vector<double>& out) {
  out.resize(m);
  switch (dist) {
    case IidDist::std_normal:
      for (auto& v : out) v = stream.next_normal();
      break;
    case IidDist::rademacher:
      for (auto& v : out) v = stream.next_sign();
      break;
    case IidDist::uniform_sym:
      // uniform on [-sqrt(3), sqrt(3)]: unit variance
      for (auto& v : out) v = (2.0 * stream.next_unit() - 1.0) * rng::kSqrt3;
      break;
  }
}

void fill_permuted(std::span<const double> multiset, rng::Stream& stream,
                   std::vector<double>& out, bool with_signs) {
  out.assign(multiset.begin(), multiset.end());
  fisher_yates(out, stream);
  if (with_signs) {
    for (auto& v : out) v *= stream.next_sign();
  }
}

void fill_equicorrelated(double rho, std::uint64_t m, rng::Stream& stream,
                         std::vector<double>& out) {
  out.resize(m);
  const double w = stream.next_normal();
  const double a = std::sqrt(rho);
  const double b = std::sqrt(1.0 - rho);
  for (auto& v : out) v = a * w + b * stream.next_normal();
}

void fill_scale_mixture(double delta, std::uint64_t m, rng::Stream& stream,
                        std::vector<double>& out) {
  out.resize(m);
  const double sigma = stream.next_uniform(1.0 - delta, 1.0 + delta);
  for (auto& v : out) v = sigma * stream.next_normal();
}

void check_paired(std::span<const double> base_values) {
  const std::size_t m = base_values.size();
  if (m == 0 || m % 2 != 0) {
    fail("gen_zero_sum_permutation: base length must be even and positive");
  }
  if (std::fabs(mean_square(base_values) - 1.0) > kNormalizationTol) {
    fail("gen_zero_sum_permutation: base values not normalized");
  }
  // exact +/- pairing: after sorting, v[i] must mirror -v[m-1-i]
  std::vector<double> sorted(base_values.begin(), base_values.end());
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < m / 2; ++i) {
    if (sorted[i] != -sorted[m - 1 - i] || !(sorted[m - 1 - i] > 0.0)) {
      fail("gen_zero_sum_permutation: values do not form exact +/- pairs");
    }
  }
}

}  // namespace

bool ArrayRow::all_finite() const {
  for (double v : values) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

std::string_view family_name(Family f) {
  switch (f) {
    case Family::iid_symmetric: return "iid_symmetric";
    case Family::rademacher_magnitude: return "rademacher_magnitude";
    case Family::zero_sum_permutation: return "zero_sum_permutation";
    case Family::equicorrelated_gaussian: return "equicorrelated_gaussian";
    case Family::scale_mixture: return "scale_mixture";
  }
  return "?";
}

std::optional<Family> family_from_name(std::string_view name) {
  for (Family f : {Family::iid_symmetric, Family::rademacher_magnitude,
                   Family::zero_sum_permutation, Family::equicorrelated_gaussian,
                   Family::scale_mixture}) {
    if (family_name(f) == name) return f;
  }
  return std::nullopt;
}

std::string_view iid_dist_name(IidDist d) {
  switch (d) {
    case IidDist::std_normal: return "std_normal";
    case IidDist::rademacher: return "rademacher";
    case IidDist::uniform_sym: return "uniform_sym";
  }
  return "?";
}

std::optional<IidDist> iid_dist_from_name(std::string_view name) {
  for (IidDist d :
       {IidDist::std_normal, IidDist::rademacher, IidDist::uniform_sym}) {
    if (iid_dist_name(d) == name) return d;
  }
  return std::nullopt;
}

double RhoRule::at(std::uint64_t m) const {
  return vanishing ? c / double(m) : value;
}

double DeltaRule::at(std::uint64_t m) const {
  return vanishing ? coeff * std::pow(double(m), exponent) : value;
}

double mean_square(std::span<const double> x) {
  if (x.empty()) return 0.0;
  return kernels::sum_squares(x) / double(x.size());
}

std::vector<double> normalize_magnitudes(std::span<const double> raw) {
  if (raw.empty()) fail("normalize_magnitudes: empty input");
  for (double v : raw) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      fail("normalize_magnitudes: entries must be positive and finite");
    }
  }
  const double scale = 1.0 / std::sqrt(mean_square(raw));
  std::vector<double> out(raw.begin(), raw.end());
  for (double& v : out) v *= scale;
  return out;
}

ArrayRow gen_iid_symmetric(IidDist dist, std::uint64_t m, rng::Stream& stream) {
  if (m < 1) fail("gen_iid_symmetric: m must be >= 1");
  ArrayRow row;
  row.generator_id = family_name(Family::iid_symmetric);
  fill_iid(dist, m, stream, row.values);
  return row;
}

ArrayRow gen_rademacher_magnitude(std::span<const double> magnitudes,
                                  rng::Stream& stream) {
  if (magnitudes.empty()) fail("gen_rademacher_magnitude: empty magnitudes");
  if (std::fabs(mean_square(magnitudes) - 1.0) > kNormalizationTol) {
    fail("gen_rademacher_magnitude: magnitudes not normalized");
  }
  ArrayRow row;
  row.generator_id = family_name(Family::rademacher_magnitude);
  fill_permuted(magnitudes, stream, row.values, /*with_signs=*/true);
  return row;
}

ArrayRow gen_zero_sum_permutation(std::span<const double> base_values,
                                  rng::Stream& stream) {
  check_paired(base_values);
  ArrayRow row;
  row.generator_id = family_name(Family::zero_sum_permutation);
  fill_permuted(base_values, stream, row.values, /*with_signs=*/false);
  return row;
}

ArrayRow gen_equicorrelated_gaussian(double rho, std::uint64_t m,
                                     rng::Stream& stream) {
  if (!(rho >= 0.0 && rho < 1.0)) {
    fail("gen_equicorrelated_gaussian: rho must be in [0,1)");
  }
  if (m < 1) fail("gen_equicorrelated_gaussian: m must be >= 1");
  ArrayRow row;
  row.generator_id = family_name(Family::equicorrelated_gaussian);
  fill_equicorrelated(rho, m, stream, row.values);
  return row;
}

ArrayRow gen_scale_mixture(double delta, std::uint64_t m, rng::Stream& stream) {
  if (!(delta >= 0.0 && delta < 1.0)) {
    fail("gen_scale_mixture: delta must be in [0,1)");
  }
  if (m < 1) fail("gen_scale_mixture: m must be >= 1");
  ArrayRow row;
  row.generator_id = family_name(Family::scale_mixture);
  fill_scale_mixture(delta, m, stream, row.values);
  return row;
}

void GeneratorSpec::validate(std::uint64_t m_max) const {
  switch (family) {
    case Family::iid_symmetric:
      break;
    case Family::rademacher_magnitude:
    case Family::zero_sum_permutation:
      if (magnitudes.kind == MagnitudeRule::Kind::explicit_list) {
        if (magnitudes.values.empty()) {
          fail("generator.magnitudes: explicit list must be nonempty");
        }
        for (double v : magnitudes.values) {
          if (!(v > 0.0) || !std::isfinite(v)) {
            fail("generator.magnitudes: entries must be positive and finite");
          }
        }
      }
      break;
    case Family::equicorrelated_gaussian:
      if (rho.vanishing) {
        if (!(rho.c >= 0.0)) fail("generator.rho_rule.c: must be >= 0");
      } else if (!(rho.value >= 0.0 && rho.value < 1.0)) {
        fail("generator.rho: must be in [0,1)");
      }
      break;
    case Family::scale_mixture:
      if (delta.vanishing) {
        if (!(delta.coeff >= 0.0)) fail("generator.delta_rule.coeff: must be >= 0");
        if (!(delta.exponent < 0.0)) {
          fail("generator.delta_rule.exponent: must be negative");
        }
      } else if (!(delta.value >= 0.0 && delta.value < 1.0)) {
        fail("generator.delta: must be in [0,1)");
      }
      break;
  }
  (void)m_max;
}

HypothesisProfile hypothesis_profile(const GeneratorSpec& spec) {
  HypothesisProfile p;
  p.exchangeable_by_construction = true;
  p.marginal_symmetric = true;
  p.cond1_expected = true;
  p.cond2_expected = true;
  switch (spec.family) {
    case Family::iid_symmetric:
      p.jointly_sign_symmetric = true;
      p.extendable = true;
      p.cond3_lemma_expected = true;
      p.cond3_theorem_expected = true;
      break;
    case Family::rademacher_magnitude:
      p.jointly_sign_symmetric = true;
      p.extendable = false;
      p.cond3_lemma_expected = true;
      p.cond3_theorem_expected = true;
      break;
    case Family::zero_sum_permutation:
      // symmetric marginals only: flipping a coordinate subset changes the
      // joint law (the full sum stops being identically zero)
      p.jointly_sign_symmetric = false;
      p.extendable = false;
      p.cond3_lemma_expected = true;
      p.cond3_theorem_expected = true;
      break;
    case Family::equicorrelated_gaussian: {
      const bool vanishes = spec.rho.vanishing || spec.rho.value == 0.0;
      p.jointly_sign_symmetric = !spec.rho.vanishing && spec.rho.value == 0.0;
      p.extendable = true;
      p.cond1_expected = vanishes;
      p.cond3_lemma_expected = vanishes;
      p.cond3_theorem_expected = vanishes;
      break;
    }
    case Family::scale_mixture: {
      const bool vanishes = spec.delta.vanishing || spec.delta.value == 0.0;
      p.jointly_sign_symmetric = true;
      p.extendable = true;
      p.cond3_lemma_expected = vanishes;
      p.cond3_theorem_expected = vanishes;
      break;
    }
  }
  return p;
}

RowSource::RowSource(const GeneratorSpec& spec, std::uint64_t master_seed,
                     std::uint64_t m)
    : spec_(spec), master_seed_(master_seed), m_(m) {
  if (m < 1) fail("RowSource: m must be >= 1");
  spec_.validate();
  const bool paired = spec_.family == Family::zero_sum_permutation;
  if (paired && m % 2 != 0) {
    fail("zero_sum_permutation requires even m, got m=" + std::to_string(m));
  }
  if (spec_.family == Family::rademacher_magnitude || paired) {
    const std::size_t count = paired ? m / 2 : m;
    std::vector<double> mags;
    switch (spec_.magnitudes.kind) {
      case MagnitudeRule::Kind::unit:
        mags.assign(count, 1.0);
        break;
      case MagnitudeRule::Kind::halfnormal_draws: {
        rng::Stream aux =
            rng::derive_stream(master_seed_, m_, rng::kAuxMagnitudes);
        mags.resize(count);
        for (auto& v : mags) {
          do {
            v = std::fabs(aux.next_normal());
          } while (v == 0.0);
        }
        break;
      }
      case MagnitudeRule::Kind::uniform_draws: {
        rng::Stream aux =
            rng::derive_stream(master_seed_, m_, rng::kAuxMagnitudes);
        mags.resize(count);
        for (auto& v : mags) v = aux.next_uniform(0.5, 1.5);
        break;
      }
      case MagnitudeRule::Kind::explicit_list:
        if (spec_.magnitudes.values.size() != count) {
          fail("generator.magnitudes: explicit list has length " +
               std::to_string(spec_.magnitudes.values.size()) + ", need " +
               std::to_string(count) + " at m=" + std::to_string(m));
        }
        mags = spec_.magnitudes.values;
        break;
    }
    if (paired) {
      resolved_.resize(m);
      for (std::size_t i = 0; i < count; ++i) {
        resolved_[2 * i] = mags[i];
        resolved_[2 * i + 1] = -mags[i];
      }
      const double scale = 1.0 / std::sqrt(mean_square(resolved_));
      for (auto& v : resolved_) v *= scale;
    } else {
      resolved_ = normalize_magnitudes(mags);
    }
  } else if (spec_.family == Family::equicorrelated_gaussian) {
    rho_ = spec_.rho.at(m);
    if (!(rho_ >= 0.0 && rho_ < 1.0)) {
      fail("generator.rho: resolves to " + std::to_string(rho_) + " at m=" +
           std::to_string(m) + ", must be in [0,1)");
    }
  } else if (spec_.family == Family::scale_mixture) {
    delta_ = spec_.delta.at(m);
    if (!(delta_ >= 0.0 && delta_ < 1.0)) {
      fail("generator.delta: resolves to " + std::to_string(delta_) +
           " at m=" + std::to_string(m) + ", must be in [0,1)");
    }
  }
}

void RowSource::generate_into(ArrayRow& row, rng::Stream& stream) const {
  switch (spec_.family) {
    case Family::iid_symmetric:
      fill_iid(spec_.dist, m_, stream, row.values);
      break;
    case Family::rademacher_magnitude:
      fill_permuted(resolved_, stream, row.values, /*with_signs=*/true);
      break;
    case Family::zero_sum_permutation:
      fill_permuted(resolved_, stream, row.values, /*with_signs=*/false);
      break;
    case Family::equicorrelated_gaussian:
      fill_equicorrelated(rho_, m_, stream, row.values);
      break;
    case Family::scale_mixture:
      fill_scale_mixture(delta_, m_, stream, row.values);
      break;
  }
  row.generator_id = spec_.id();
  row.seed_info.master_seed = master_seed_;
  row.seed_info.row_size = m_;
}

}  // namespace exchlab
