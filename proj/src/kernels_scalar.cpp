#include <cmath>
#include <cstddef>

#include "kernels_impl.hpp"

// Reference implementation of the lane-split reductions. This is the
// ground truth the SIMD variants are equivalence-tested against.

namespace exchlab::kernels {
namespace {

using detail::kLanes;
using detail::LaneState;
using detail::two_sum_add;

double sum_scalar(const double* x, std::size_t n) {
  LaneState st;
  const std::size_t blocks = n / kLanes;
  for (std::size_t b = 0; b < blocks; ++b) {
    const double* p = x + b * kLanes;
    for (std::size_t j = 0; j < kLanes; ++j) {
      two_sum_add(st.s[j], st.c[j], p[j]);
    }
  }
  return detail::finish(st, x + blocks * kLanes, n - blocks * kLanes);
}

double sum_squares_scalar(const double* x, std::size_t n) {
  LaneState st;
  const std::size_t blocks = n / kLanes;
  for (std::size_t b = 0; b < blocks; ++b) {
    const double* p = x + b * kLanes;
    for (std::size_t j = 0; j < kLanes; ++j) {
      two_sum_add(st.s[j], st.c[j], p[j] * p[j]);
    }
  }
  const std::size_t done = blocks * kLanes;
  double tail[kLanes];
  const std::size_t tail_n = n - done;
  for (std::size_t j = 0; j < tail_n; ++j) tail[j] = x[done + j] * x[done + j];
  return detail::finish(st, tail, tail_n);
}

double sum_abs_scalar(const double* x, std::size_t n) {
  LaneState st;
  const std::size_t blocks = n / kLanes;
  for (std::size_t b = 0; b < blocks; ++b) {
    const double* p = x + b * kLanes;
    for (std::size_t j = 0; j < kLanes; ++j) {
      two_sum_add(st.s[j], st.c[j], std::fabs(p[j]));
    }
  }
  const std::size_t done = blocks * kLanes;
  double tail[kLanes];
  const std::size_t tail_n = n - done;
  for (std::size_t j = 0; j < tail_n; ++j) tail[j] = std::fabs(x[done + j]);
  return detail::finish(st, tail, tail_n);
}

double max_abs_scalar(const double* x, std::size_t n) {
  double m[kLanes] = {0.0, 0.0, 0.0, 0.0};
  const std::size_t blocks = n / kLanes;
  for (std::size_t b = 0; b < blocks; ++b) {
    const double* p = x + b * kLanes;
    for (std::size_t j = 0; j < kLanes; ++j) {
      const double a = std::fabs(p[j]);
      if (a > m[j]) m[j] = a;
    }
  }
  return detail::finish_max(m, x + blocks * kLanes, n - blocks * kLanes);
}

double paired_product_sum_scalar(const double* x, std::size_t n) {
  LaneState st;
  const std::size_t pairs = n / 2;
  const std::size_t blocks = pairs / kLanes;  // 8 elements per block
  for (std::size_t b = 0; b < blocks; ++b) {
    const double* p = x + b * 2 * kLanes;
    for (std::size_t j = 0; j < kLanes; ++j) {
      two_sum_add(st.s[j], st.c[j], p[2 * j] * p[2 * j + 1]);
    }
  }
  const std::size_t done = blocks * kLanes;
  double tail[kLanes];
  const std::size_t tail_n = pairs - done;
  for (std::size_t j = 0; j < tail_n; ++j) {
    tail[j] = x[2 * (done + j)] * x[2 * (done + j) + 1];
  }
  return detail::finish(st, tail, tail_n);
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable t = {sum_scalar, sum_squares_scalar, sum_abs_scalar,
                                max_abs_scalar, paired_product_sum_scalar};
  return t;
}

}  // namespace exchlab::kernels
