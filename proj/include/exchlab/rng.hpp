#pragma once

#include <array>
#include <cmath>
#include <cstdint>

// Counter-based random streams. A stream is a xoshiro256++ engine whose
// state is derived from (master_seed, m, replicate_index) through a chain
// of SplitMix64 avalanche steps, so any (seed, m, replicate) triple maps
// to the same stream no matter which thread asks for it or in what order.

namespace exchlab::rng {

inline constexpr double kSqrt3 = 1.7320508075688772935;

// Replicate indices at or above this value are reserved for per-cell
// auxiliary draws (magnitude multisets etc.), keeping them disjoint from
// the replicate loop.
inline constexpr std::uint64_t kAuxBase = 0xF000000000000000ull;
inline constexpr std::uint64_t kAuxMagnitudes = kAuxBase + 0;

// SplitMix64 finalizer (Steele, Lea & Flood's fixed-increment generator).
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

class Stream {
 public:
  Stream() = default;

  explicit Stream(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& w : state_) w = splitmix64(sm);
    if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
  }

  // xoshiro256++ (Blackman & Vigna).
  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform on [0, 1) with 53 random bits.
  double next_unit() { return double(next_u64() >> 11) * 0x1.0p-53; }

  double next_uniform(double lo, double hi) {
    return lo + next_unit() * (hi - lo);
  }

  // +1 or -1 with equal probability.
  double next_sign() { return (next_u64() >> 63) ? 1.0 : -1.0; }

  // Standard normal via the Marsaglia polar method; the second variate of
  // each accepted pair is cached.
  double next_normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u, v, r2;
    do {
      u = 2.0 * next_unit() - 1.0;
      v = 2.0 * next_unit() - 1.0;
      r2 = u * u + v * v;
    } while (r2 >= 1.0 || r2 == 0.0);
    const double f = std::sqrt(-2.0 * std::log(r2) / r2);
    spare_ = v * f;
    have_spare_ = true;
    return u * f;
  }

  // Unbiased integer in [0, bound) via Lemire's multiply-shift rejection.
  std::uint64_t next_below(std::uint64_t bound) {
    unsigned __int128 mul = (unsigned __int128)next_u64() * bound;
    auto low = (std::uint64_t)mul;
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        mul = (unsigned __int128)next_u64() * bound;
        low = (std::uint64_t)mul;
      }
    }
    return (std::uint64_t)(mul >> 64);
  }

  std::array<std::uint64_t, 4> state() const { return state_; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> state_{1, 2, 3, 4};
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// (master_seed, m, replicate) -> stream state. Each input is avalanched
// before being folded in, so neighbouring triples land far apart.
inline Stream derive_stream(std::uint64_t master_seed, std::uint64_t m,
                            std::uint64_t replicate_index) {
  std::uint64_t h = master_seed;
  std::uint64_t a = h;
  h = splitmix64(a);
  a = h ^ (m * 0xD6E8FEB86659FD93ull);
  h = splitmix64(a);
  a = h ^ (replicate_index * 0xA3B195354A39B70Dull);
  h = splitmix64(a);
  return Stream(h);
}

}  // namespace exchlab::rng
