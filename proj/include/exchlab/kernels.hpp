#pragma once

#include <cstddef>
#include <span>
#include <string_view>

// Row-reduction kernels. Every reduction is defined by one fixed algorithm
// (4 interleaved Kahan lanes with Knuth two-sum error capture, elements
// assigned to lane i % 4, lanes merged in lane order) so the scalar
// reference and the AVX2 variant produce bit-identical results. The active
// variant is selected once at startup from CPU features and can be forced
// for testing.

namespace exchlab::kernels {

enum class Backend { scalar, avx2 };

bool backend_available(Backend b);
Backend active_backend();

// Forces a specific backend; throws std::invalid_argument if the CPU does
// not support it. Intended for equivalence tests and benchmarking.
void force_backend(Backend b);
void reset_backend();

std::string_view backend_name(Backend b);

// Compensated sum of all elements (empty input sums to 0).
double sum(std::span<const double> x);

// Compensated sum of squares.
double sum_squares(std::span<const double> x);

// Compensated sum of absolute values.
double sum_abs(std::span<const double> x);

// max_i |x_i|; 0 for empty input.
double max_abs(std::span<const double> x);

// Compensated sum of the floor(n/2) disjoint-pair products
// x[0]*x[1] + x[2]*x[3] + ...; a trailing unpaired element is ignored.
double paired_product_sum(std::span<const double> x);

}  // namespace exchlab::kernels
