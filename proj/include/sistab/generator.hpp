#pragma once

#include <cmath>
#include <cstdint>

#include "sistab/model.hpp"
#include "sistab/rng.hpp"

namespace sistab {

enum class GeneratorKind { poisson, uniform };

/// Random-table generator configuration.  "poisson" is experiment option 1,
/// "uniform" is option 2.
struct GeneratorConfig {
  GeneratorKind kind = GeneratorKind::poisson;
  double lambda = 1.0;  // poisson only
  std::size_t cells = 1;
  std::uint64_t seed = kDefaultSeed;
};

/// Pre-fallback branch tallies, for distribution checks.
struct GeneratorStats {
  std::int64_t big_branch = 0;   // r <= 5/2^k: uniform in [1,1000]
  std::int64_t mid_branch = 0;   // else r <= 1/2: 1+Poisson or uniform [1,10]
  std::int64_t zero_branch = 0;  // else 0
  bool fallback_fired = false;
};

/// Per cell, draw r uniform on (0,1): below 5/2^k the cell gets a uniform
/// integer in [1,1000]; below 1/2 it gets 1+Poisson(lambda) (poisson kind)
/// or a uniform integer in [1,10] (uniform kind); otherwise 0.  While no
/// cell is above 10, one uniformly chosen cell is replaced by a uniform
/// integer in [1,1000]; every returned table therefore has a cell > 10.
inline TableVector generate_table(const GeneratorConfig& config, Rng& rng,
                                  GeneratorStats* stats = nullptr) {
  if (config.cells < 1) throw InvalidInput("generate_table: cells must be >= 1");
  if (config.kind == GeneratorKind::poisson && !(config.lambda > 0.0)) {
    throw InvalidInput("generate_table: lambda must be positive");
  }
  const std::size_t k = config.cells;
  const double big_threshold = 5.0 * std::pow(2.0, -static_cast<double>(k));
  TableVector table(k, 0);
  for (std::size_t i = 0; i < k; ++i) {
    const double r = uniform_unit(rng);
    if (r <= big_threshold) {
      table[i] = uniform_int(rng, 1, 1000);
      if (stats) ++stats->big_branch;
    } else if (r <= 0.5) {
      table[i] = config.kind == GeneratorKind::poisson
                     ? 1 + poisson(rng, config.lambda)
                     : uniform_int(rng, 1, 10);
      if (stats) ++stats->mid_branch;
    } else {
      if (stats) ++stats->zero_branch;
    }
  }
  auto has_large = [&] {
    for (Int v : table) {
      if (v > 10) return true;
    }
    return false;
  };
  while (!has_large()) {
    const auto idx = static_cast<std::size_t>(
        uniform_int(rng, 0, static_cast<Int>(k) - 1));
    table[idx] = uniform_int(rng, 1, 1000);
    if (stats) stats->fallback_fired = true;
  }
  return table;
}

}  // namespace sistab
