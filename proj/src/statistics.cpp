#include "exchlab/statistics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "exchlab/kernels.hpp"

namespace exchlab {

namespace {
[[noreturn]] void fail(const std::string& msg) {
  throw std::invalid_argument(msg);
}
}  // namespace

std::uint64_t ScheduleSpec::k_for(std::uint64_t m) const {
  const auto k = std::uint64_t(std::floor(gamma * double(m)));
  return k < 1 ? 1 : k;
}

void ScheduleSpec::validate() const {
  if (m_values.empty()) fail("schedule.m_values: must be nonempty");
  std::uint64_t prev = 0;
  for (std::uint64_t m : m_values) {
    if (m < 1) fail("schedule.m_values: entries must be positive");
    if (m <= prev) fail("schedule.m_values: must be strictly increasing");
    prev = m;
  }
  if (!(gamma >= 0.0 && gamma < 1.0)) fail("schedule.gamma: must be in [0,1)");
}

std::string_view stat_kind_name(StatKind k) {
  return k == StatKind::full_sum ? "full_sum" : "weber";
}

std::optional<StatKind> stat_kind_from_name(std::string_view name) {
  if (name == "full_sum") return StatKind::full_sum;
  if (name == "weber") return StatKind::weber;
  return std::nullopt;
}

void StatisticKind::validate() const {
  if (kind == StatKind::weber && !(gamma >= 0.0 && gamma < 1.0)) {
    fail("statistic.gamma: must be in [0,1) for the weber statistic");
  }
}

ArrayRow sign_flip_tail(const ArrayRow& row, std::uint64_t k) {
  const std::uint64_t m = row.m();
  if (k < 1 || k > m) {
    fail("sign_flip_tail: k must satisfy 1 <= k <= m, got k=" +
         std::to_string(k) + ", m=" + std::to_string(m));
  }
  ArrayRow out = row;
  for (std::uint64_t i = k; i < m; ++i) out.values[i] = -out.values[i];
  return out;
}

double full_sum_statistic(std::span<const double> values) {
  const std::size_t m = values.size();
  if (m < 1) fail("full_sum_statistic: empty row");
  return kernels::sum(values) / std::sqrt(double(m));
}

double full_sum_statistic(const ArrayRow& row) {
  return full_sum_statistic(row.span());
}

double weber_statistic(std::span<const double> values, std::uint64_t k) {
  const std::size_t m = values.size();
  if (k < 1 || k >= m) {
    fail("weber_statistic: k must satisfy 1 <= k < m, got k=" +
         std::to_string(k) + ", m=" + std::to_string(m));
  }
  const double head = kernels::sum(values.first(k));
  const double total = kernels::sum(values);
  return std::sqrt(double(k)) * (head / double(k) - total / double(m));
}

double weber_statistic(const ArrayRow& row, std::uint64_t k) {
  return weber_statistic(row.span(), k);
}

double proof_identity_residual(std::span<const double> values) {
  const std::size_t m = values.size();
  if (m < 2 || m % 2 != 0) {
    fail("proof_identity_residual: m must be even and >= 2, got m=" +
         std::to_string(m));
  }
  const std::size_t k = m / 2;
  static thread_local std::vector<double> flipped;
  flipped.assign(values.begin(), values.end());
  for (std::size_t i = k; i < m; ++i) flipped[i] = -flipped[i];
  const double head = kernels::sum(std::span<const double>(flipped).first(k));
  const double lhs =
      (2.0 / double(m)) * head - kernels::sum(flipped) / double(m);
  const double rhs = kernels::sum(values) / double(m);
  return std::fabs(lhs - rhs);
}

double proof_identity_residual(const ArrayRow& row) {
  return proof_identity_residual(row.span());
}

ArrayRow truncate_to_even(const ArrayRow& row) {
  if (row.m() < 2) fail("truncate_to_even: m must be >= 2");
  ArrayRow out = row;
  if (out.values.size() % 2 != 0) out.values.pop_back();
  return out;
}

}  // namespace exchlab
