#include "exchlab/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "exchlab/kernels.hpp"
#include "exchlab/version.hpp"

namespace exchlab::engine {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

unsigned resolve_threads(unsigned hint, std::uint64_t work) {
  unsigned t = hint != 0 ? hint : std::thread::hardware_concurrency();
  if (t < 1) t = 1;
  if (std::uint64_t(t) > work) t = unsigned(work);
  return t;
}

}  // namespace

void ExperimentSpec::validate() const {
  if (name.empty()) throw std::invalid_argument("experiment name must be nonempty");
  generator.validate();
  schedule.validate();
  statistic.validate();
  if (n_rep < 100) {
    throw std::invalid_argument("n_rep: must be >= 100, got " +
                                std::to_string(n_rep));
  }
  if (epsilons.empty()) throw std::invalid_argument("epsilons: must be nonempty");
  for (double e : epsilons) {
    if (!(e > 0.0)) throw std::invalid_argument("epsilons: must be positive");
  }
  if (statistic.kind == StatKind::weber) {
    for (std::uint64_t m : schedule.m_values) {
      if (schedule.k_for(m) >= m) {
        throw std::invalid_argument(
            "weber statistic requires k(m) < m; fails at m=" +
            std::to_string(m));
      }
    }
  }
  if (generator.family == Family::zero_sum_permutation) {
    for (std::uint64_t m : schedule.m_values) {
      if (m % 2 != 0) {
        throw std::invalid_argument(
            "zero_sum_permutation requires even m; fails at m=" +
            std::to_string(m));
      }
    }
  }
  if (generator.magnitudes.kind == MagnitudeRule::Kind::explicit_list &&
      (generator.family == Family::rademacher_magnitude ||
       generator.family == Family::zero_sum_permutation)) {
    const bool paired = generator.family == Family::zero_sum_permutation;
    for (std::uint64_t m : schedule.m_values) {
      const std::uint64_t need = paired ? m / 2 : m;
      if (generator.magnitudes.values.size() != need) {
        throw std::invalid_argument(
            "generator magnitude list has length " +
            std::to_string(generator.magnitudes.values.size()) + " but m=" +
            std::to_string(m) + " needs " + std::to_string(need));
      }
    }
  }
}

CellResult run_cell(const ExperimentSpec& spec, std::uint64_t m) {
  const auto t0 = std::chrono::steady_clock::now();
  if (spec.n_rep < 1) throw std::invalid_argument("run_cell: n_rep must be >= 1");
  const std::uint64_t n = spec.n_rep;
  const std::uint64_t seed = spec.master_seed;
  const std::uint64_t k = spec.schedule.k_for(m);
  const bool weber = spec.statistic.kind == StatKind::weber;
  if (weber && k >= m) {
    throw std::invalid_argument("run_cell: weber statistic needs k(m) < m");
  }
  const RowSource source(spec.generator, seed, m);

  // even truncation for the sign-flip probe ("disregard the last element")
  const std::uint64_t mj = m - (m % 2);
  const bool joint = mj >= 2;
  const std::uint64_t pairs = m / 2;
  const double root_m = std::sqrt(double(m));
  const std::uint64_t quad_div = weber ? k : m;

  std::vector<double> stat(n), pair_corr(n), scaled_max(n), quad(n), coord1(n);
  std::vector<double> jbase(joint ? n : 0), jflip(joint ? n : 0);

  const std::uint64_t total = joint ? 2 * n : n;
  auto worker = [&](std::uint64_t lo, std::uint64_t hi) {
    ArrayRow row;
    std::vector<double> flip_scratch;
    for (std::uint64_t r = lo; r < hi; ++r) {
      auto stream = derive_stream(seed, m, r);
      source.generate_into(row, stream);
      row.seed_info.replicate_index = r;
      const auto values = row.span();
      if (r < n) {
        stat[r] = weber ? weber_statistic(values, k)
                        : full_sum_statistic(values);
        pair_corr[r] = pairs > 0
                           ? kernels::paired_product_sum(values) / double(pairs)
                           : kNaN;
        scaled_max[r] = kernels::max_abs(values) / root_m;
        quad[r] =
            kernels::sum_squares(values.first(quad_div)) / double(quad_div);
        coord1[r] = values.front();
        if (joint) jbase[r] = full_sum_statistic(values.first(mj));
      } else {
        flip_scratch.assign(values.begin(), values.begin() + mj);
        for (std::uint64_t i = mj / 2; i < mj; ++i) {
          flip_scratch[i] = -flip_scratch[i];
        }
        jflip[r - n] = full_sum_statistic(flip_scratch);
      }
    }
  };

  const unsigned T = resolve_threads(spec.threads, total);
  if (T <= 1) {
    worker(0, total);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(T - 1);
    const std::uint64_t chunk = (total + T - 1) / T;
    for (unsigned t = 1; t < T; ++t) {
      const std::uint64_t lo = t * chunk;
      if (lo >= total) break;
      pool.emplace_back(worker, lo, std::min(total, lo + chunk));
    }
    worker(0, std::min(total, chunk));
    for (auto& th : pool) th.join();
  }

  CellResult cell;
  cell.m = m;
  cell.sample.kind = spec.statistic;
  cell.sample.m = m;
  cell.sample.seed = seed;
  cell.sample.values = std::move(stat);

  auto& cond = cell.conditions;
  cond.m = m;
  cond.n_rep = n;
  cond.pair_corr = pairs > 0 ? checks::mean_estimate(pair_corr)
                             : checks::Estimate{kNaN, kNaN, n};
  cond.epsilons = spec.epsilons;
  cond.quad_variant =
      weber ? checks::QuadVariant::lemma_k : checks::QuadVariant::theorem_m;
  for (double eps : spec.epsilons) {
    std::uint64_t exc = 0, conc = 0;
    for (std::uint64_t r = 0; r < n; ++r) {
      if (scaled_max[r] > eps) ++exc;
      if (std::fabs(quad[r] - 1.0) > eps) ++conc;
    }
    cond.max_exceedance_prob.push_back(double(exc) / double(n));
    cond.quad_concentration_prob.push_back(double(conc) / double(n));
  }
  {
    std::vector<double> negated(coord1.size());
    for (std::size_t i = 0; i < coord1.size(); ++i) negated[i] = -coord1[i];
    cond.marginal_symmetry_ks = checks::two_sample_ks(coord1, negated);
  }
  cond.joint_sign_symmetry_ks =
      joint ? checks::two_sample_ks(jbase, jflip) : kNaN;
  cond.symmetry_n = n;

  cell.gof = gof::evaluate_gof(cell.sample);
  cell.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return cell;
}

ExperimentReport run_experiment(const ExperimentSpec& spec) {
  spec.schedule.validate();
  ExperimentReport report;
  report.spec = spec;
  report.version = kVersion;
  for (std::uint64_t m : spec.schedule.m_values) {
    try {
      report.cells.push_back(run_cell(spec, m));
    } catch (const std::exception& e) {
      throw std::runtime_error("experiment '" + spec.name + "', cell m=" +
                               std::to_string(m) + ": " + e.what());
    }
  }
  return report;
}

}  // namespace exchlab::engine
