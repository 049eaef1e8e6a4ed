#pragma once

#include <cmath>
#include <cstddef>

// Shared pieces of the lane-split reduction algorithm. Both backends run
// the identical sequence of IEEE operations: the block loops differ only
// in whether the four lanes live in scalars or one AVX2 register, so the
// results match bit for bit. Requires -ffp-contract=off.

namespace exchlab::kernels::detail {

inline constexpr std::size_t kLanes = 4;

struct LaneState {
  double s[kLanes] = {0.0, 0.0, 0.0, 0.0};
  double c[kLanes] = {0.0, 0.0, 0.0, 0.0};
};

// Knuth's branch-free two-sum: s + x = t + e exactly.
inline void two_sum_add(double& s, double& c, double x) {
  const double t = s + x;
  const double z = t - s;
  const double e = (s - (t - z)) + (x - z);
  c += e;
  s = t;
}

// Feeds the <=3 trailing elements into lanes 0..t-1 and merges the lanes
// in index order. Shared verbatim by both backends.
inline double finish(LaneState& st, const double* tail, std::size_t tail_n) {
  for (std::size_t j = 0; j < tail_n; ++j) {
    two_sum_add(st.s[j], st.c[j], tail[j]);
  }
  double total = 0.0;
  double comp = 0.0;
  for (std::size_t j = 0; j < kLanes; ++j) {
    two_sum_add(total, comp, st.s[j]);
    comp += st.c[j];
  }
  return total + comp;
}

inline double finish_max(const double m[kLanes], const double* tail,
                         std::size_t tail_n) {
  double r = m[0];
  for (std::size_t j = 1; j < kLanes; ++j) {
    if (m[j] > r) r = m[j];
  }
  for (std::size_t j = 0; j < tail_n; ++j) {
    const double a = std::fabs(tail[j]);
    if (a > r) r = a;
  }
  return r;
}

}  // namespace exchlab::kernels::detail

namespace exchlab::kernels {

// One entry per reduction; filled by each backend TU.
struct KernelTable {
  double (*sum)(const double*, std::size_t);
  double (*sum_squares)(const double*, std::size_t);
  double (*sum_abs)(const double*, std::size_t);
  double (*max_abs)(const double*, std::size_t);
  double (*paired_product_sum)(const double*, std::size_t);
};

const KernelTable& scalar_table();
const KernelTable& avx2_table();

}  // namespace exchlab::kernels
