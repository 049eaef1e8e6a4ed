#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace exchlab {

struct SeedInfo {
  std::uint64_t master_seed = 0;
  std::uint64_t row_size = 0;
  std::uint64_t replicate_index = 0;
};

// One realized row of the triangular array.
struct ArrayRow {
  std::vector<double> values;
  std::string generator_id;
  SeedInfo seed_info;

  std::size_t m() const { return values.size(); }
  std::span<const double> span() const { return values; }

  // Invariant check (length is structural; finiteness is what can break).
  bool all_finite() const;
};

}  // namespace exchlab
