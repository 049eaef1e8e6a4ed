#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "exchlab/row.hpp"

// Deterministic scalar statistics of a row and the sign-flip / truncation
// constructions they are proved through. All sums are compensated, so the
// algebraic identities below hold to ~1e-15 even on long rows.

namespace exchlab {

// Row-size schedule m_1 < m_2 < ... with k(m) = max(1, floor(gamma * m)).
struct ScheduleSpec {
  std::vector<std::uint64_t> m_values;
  double gamma = 0.0;

  std::uint64_t k_for(std::uint64_t m) const;

  // Throws std::invalid_argument; checks gamma in [0,1) and strictly
  // increasing positive m_values.
  void validate() const;
};

enum class StatKind { full_sum, weber };

std::string_view stat_kind_name(StatKind k);
std::optional<StatKind> stat_kind_from_name(std::string_view name);

struct StatisticKind {
  StatKind kind = StatKind::full_sum;
  double gamma = 0.0;  // weber only

  double target_sigma2() const {
    return kind == StatKind::full_sum ? 1.0 : 1.0 - gamma;
  }
  std::string_view name() const { return stat_kind_name(kind); }
  void validate() const;
};

// y_i = x_i for i <= k, -x_i for i > k (1-based, 1 <= k <= m).
ArrayRow sign_flip_tail(const ArrayRow& row, std::uint64_t k);

// (1/sqrt(m)) * sum x_i.
double full_sum_statistic(std::span<const double> values);
double full_sum_statistic(const ArrayRow& row);

// sqrt(k) * (mean of first k - mean of all m); requires 1 <= k < m.
double weber_statistic(std::span<const double> values, std::uint64_t k);
double weber_statistic(const ArrayRow& row, std::uint64_t k);

// |(2/m) sum_{i<=m/2} y_i - (1/m) sum y_i - (1/m) sum x_i| with
// y = sign_flip_tail(x, m/2); identically zero in exact arithmetic.
// Requires even m >= 2.
double proof_identity_residual(std::span<const double> values);
double proof_identity_residual(const ArrayRow& row);

// Drops the last element when m is odd; identity otherwise. Requires m >= 2.
ArrayRow truncate_to_even(const ArrayRow& row);

}  // namespace exchlab
