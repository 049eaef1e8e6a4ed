#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "exchlab/rng.hpp"
#include "exchlab/row.hpp"

// Exchangeable-row generator families. Each family constructs one row of a
// row-wise exchangeable triangular array with documented symmetry,
// extendability and condition-1/2/3 behaviour.

namespace exchlab {

enum class Family {
  iid_symmetric,
  rademacher_magnitude,
  zero_sum_permutation,
  equicorrelated_gaussian,
  scale_mixture,
};

std::string_view family_name(Family f);
std::optional<Family> family_from_name(std::string_view name);

enum class IidDist { std_normal, rademacher, uniform_sym };

std::string_view iid_dist_name(IidDist d);
std::optional<IidDist> iid_dist_from_name(std::string_view name);

// Magnitude multiset for rademacher_magnitude, and the per-pair values for
// zero_sum_permutation. Draw kinds resample (deterministically, from the
// master seed) at every row size m; an explicit list fixes m.
struct MagnitudeRule {
  enum class Kind { unit, halfnormal_draws, uniform_draws, explicit_list };
  Kind kind = Kind::unit;
  std::vector<double> values;  // explicit_list only; must be normalized
};

// rho, either fixed or the vanishing rule rho = c/m.
struct RhoRule {
  bool vanishing = false;
  double value = 0.0;  // fixed rho
  double c = 0.0;      // rho = c/m
  double at(std::uint64_t m) const;
};

// delta, either fixed or delta = coeff * m^exponent.
struct DeltaRule {
  bool vanishing = false;
  double value = 0.0;
  double coeff = 1.0;
  double exponent = -0.25;
  double at(std::uint64_t m) const;
};

struct GeneratorSpec {
  Family family = Family::iid_symmetric;
  IidDist dist = IidDist::std_normal;  // iid_symmetric
  MagnitudeRule magnitudes;            // rademacher_magnitude, zero_sum_permutation
  RhoRule rho;                         // equicorrelated_gaussian
  DeltaRule delta;                     // scale_mixture

  std::string_view id() const { return family_name(family); }

  // Throws std::invalid_argument naming the offending field.
  void validate(std::uint64_t m_max = 0) const;
};

// Machine-readable hypothesis flags for a family.
struct HypothesisProfile {
  bool exchangeable_by_construction = false;
  bool marginal_symmetric = false;
  bool jointly_sign_symmetric = false;
  bool extendable = false;
  bool cond1_expected = false;
  bool cond2_expected = false;
  bool cond3_lemma_expected = false;
  bool cond3_theorem_expected = false;
};

// Rescales so the mean square is exactly 1 (one global positive factor,
// order preserved). Throws on empty input or nonpositive entries.
std::vector<double> normalize_magnitudes(std::span<const double> raw);

double mean_square(std::span<const double> x);

ArrayRow gen_iid_symmetric(IidDist dist, std::uint64_t m, rng::Stream& stream);

// values_i = sign_i * magnitudes_{pi(i)} with iid uniform signs and an
// independent uniform permutation pi. Magnitudes must satisfy
// |mean square - 1| <= 1e-9.
ArrayRow gen_rademacher_magnitude(std::span<const double> magnitudes,
                                  rng::Stream& stream);

// Uniform random permutation of a normalized sign-paired multiset
// {+c_1,-c_1,...}; requires even length and exact +/- pairing.
ArrayRow gen_zero_sum_permutation(std::span<const double> base_values,
                                  rng::Stream& stream);

// values_i = sqrt(rho) W + sqrt(1-rho) Z_i; rho in [0,1).
ArrayRow gen_equicorrelated_gaussian(double rho, std::uint64_t m,
                                     rng::Stream& stream);

// sigma ~ U[1-delta, 1+delta] once per row, values_i = sigma Z_i.
ArrayRow gen_scale_mixture(double delta, std::uint64_t m, rng::Stream& stream);

HypothesisProfile hypothesis_profile(const GeneratorSpec& spec);

// Resolves a GeneratorSpec at one row size: materializes drawn magnitude /
// base multisets (from the reserved auxiliary stream) and the per-m rho and
// delta, then emits rows. One instance per (spec, master_seed, m) cell.
class RowSource {
 public:
  RowSource(const GeneratorSpec& spec, std::uint64_t master_seed,
            std::uint64_t m);

  void generate_into(ArrayRow& row, rng::Stream& stream) const;

  ArrayRow generate(rng::Stream& stream) const {
    ArrayRow row;
    generate_into(row, stream);
    return row;
  }

  std::uint64_t m() const { return m_; }
  std::span<const double> resolved_magnitudes() const { return resolved_; }

 private:
  const GeneratorSpec spec_;
  std::uint64_t master_seed_;
  std::uint64_t m_;
  std::vector<double> resolved_;  // magnitudes or paired base values
  double rho_ = 0.0;
  double delta_ = 0.0;
};

}  // namespace exchlab
