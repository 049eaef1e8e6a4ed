#include <immintrin.h>

#include <cstddef>

#include "kernels_impl.hpp"

// AVX2 variants. One 256-bit register holds the four lanes of the shared
// reduction algorithm, so every lane sees the same operands in the same
// order as the scalar reference. Callers must check backend_available()
// first; this TU is compiled with -mavx2.

namespace exchlab::kernels {
namespace {

using detail::kLanes;
using detail::LaneState;

struct VecAccum {
  __m256d s = _mm256_setzero_pd();
  __m256d c = _mm256_setzero_pd();

  inline void add(__m256d x) {
    const __m256d t = _mm256_add_pd(s, x);
    const __m256d z = _mm256_sub_pd(t, s);
    const __m256d e = _mm256_add_pd(_mm256_sub_pd(s, _mm256_sub_pd(t, z)),
                                    _mm256_sub_pd(x, z));
    c = _mm256_add_pd(c, e);
    s = t;
  }

  inline LaneState spill() const {
    LaneState st;
    _mm256_storeu_pd(st.s, s);
    _mm256_storeu_pd(st.c, c);
    return st;
  }
};

inline __m256d vabs(__m256d v) {
  return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v);
}

double sum_avx2(const double* x, std::size_t n) {
  VecAccum acc;
  const std::size_t blocks = n / kLanes;
  for (std::size_t b = 0; b < blocks; ++b) {
    acc.add(_mm256_loadu_pd(x + b * kLanes));
  }
  LaneState st = acc.spill();
  return detail::finish(st, x + blocks * kLanes, n - blocks * kLanes);
}

double sum_squares_avx2(const double* x, std::size_t n) {
  VecAccum acc;
  const std::size_t blocks = n / kLanes;
  for (std::size_t b = 0; b < blocks; ++b) {
    const __m256d v = _mm256_loadu_pd(x + b * kLanes);
    acc.add(_mm256_mul_pd(v, v));
  }
  LaneState st = acc.spill();
  const std::size_t done = blocks * kLanes;
  double tail[kLanes];
  const std::size_t tail_n = n - done;
  for (std::size_t j = 0; j < tail_n; ++j) tail[j] = x[done + j] * x[done + j];
  return detail::finish(st, tail, tail_n);
}

double sum_abs_avx2(const double* x, std::size_t n) {
  VecAccum acc;
  const std::size_t blocks = n / kLanes;
  for (std::size_t b = 0; b < blocks; ++b) {
    acc.add(vabs(_mm256_loadu_pd(x + b * kLanes)));
  }
  LaneState st = acc.spill();
  const std::size_t done = blocks * kLanes;
  double tail[kLanes];
  const std::size_t tail_n = n - done;
  for (std::size_t j = 0; j < tail_n; ++j) tail[j] = __builtin_fabs(x[done + j]);
  return detail::finish(st, tail, tail_n);
}

double max_abs_avx2(const double* x, std::size_t n) {
  __m256d vm = _mm256_setzero_pd();
  const std::size_t blocks = n / kLanes;
  for (std::size_t b = 0; b < blocks; ++b) {
    vm = _mm256_max_pd(vm, vabs(_mm256_loadu_pd(x + b * kLanes)));
  }
  double m[kLanes];
  _mm256_storeu_pd(m, vm);
  return detail::finish_max(m, x + blocks * kLanes, n - blocks * kLanes);
}

double paired_product_sum_avx2(const double* x, std::size_t n) {
  VecAccum acc;
  const std::size_t pairs = n / 2;
  const std::size_t blocks = pairs / kLanes;
  for (std::size_t b = 0; b < blocks; ++b) {
    const double* p = x + b * 2 * kLanes;
    const __m256d v0 = _mm256_loadu_pd(p);
    const __m256d v1 = _mm256_loadu_pd(p + kLanes);
    // unpack yields [p0 p2 p1 p3]; restore pair order so lane j holds
    // product 4b+j, matching the scalar reference.
    const __m256d prod = _mm256_mul_pd(_mm256_unpacklo_pd(v0, v1),
                                       _mm256_unpackhi_pd(v0, v1));
    acc.add(_mm256_permute4x64_pd(prod, 0xD8));
  }
  LaneState st = acc.spill();
  const std::size_t done = blocks * kLanes;
  double tail[kLanes];
  const std::size_t tail_n = pairs - done;
  for (std::size_t j = 0; j < tail_n; ++j) {
    tail[j] = x[2 * (done + j)] * x[2 * (done + j) + 1];
  }
  return detail::finish(st, tail, tail_n);
}

}  // namespace

const KernelTable& avx2_table() {
  static const KernelTable t = {sum_avx2, sum_squares_avx2, sum_abs_avx2,
                                max_abs_avx2, paired_product_sum_avx2};
  return t;
}

}  // namespace exchlab::kernels
