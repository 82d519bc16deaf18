#pragma once

#include <algorithm>
#include <limits>
#include <vector>

#include "sistab/model.hpp"
#include "sistab/rng.hpp"

namespace testutil {

using sistab::DesignMatrix;
using sistab::FiberSpec;
using sistab::Int;
using sistab::TableVector;

// Independent oracle: enumerate the whole box prod_j [0, cap_j] with
// cap_j = min over rows of b_l / a_lj, and keep the tables with A x = b.
// Deliberately shares no code with FiberSearch; keep instances tiny.
inline std::vector<TableVector> brute_force_fiber(const DesignMatrix& a,
                                                  const std::vector<Int>& b) {
  const std::size_t k = a.cols();
  std::vector<Int> cap(k, std::numeric_limits<Int>::max());
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t r = 0; r < a.rows(); ++r) {
      if (a.at(r, j) > 0) {
        const Int c = b[r] >= 0 ? b[r] / a.at(r, j) : -1;
        cap[j] = std::min(cap[j], c);
      }
    }
    if (cap[j] < 0) return {};
  }
  std::vector<TableVector> found;
  TableVector x(k, 0);
  for (;;) {
    bool match = true;
    for (std::size_t r = 0; r < a.rows() && match; ++r) {
      Int acc = 0;
      for (std::size_t j = 0; j < k; ++j) acc += a.at(r, j) * x[j];
      match = acc == b[r];
    }
    if (match) found.push_back(x);
    std::size_t j = k;
    bool done = true;
    while (j-- > 0) {
      if (x[j] < cap[j]) {
        ++x[j];
        done = false;
        break;
      }
      x[j] = 0;
    }
    if (done) return found;
  }
}

// 1 x 2 system x_1 + alpha x_2 = alpha + 1, the worked rejection example.
inline FiberSpec alpha_system(Int alpha) {
  DesignMatrix a(1, 2, {1, alpha});
  return FiberSpec(a, {alpha + 1});
}

inline TableVector random_table(std::size_t cells, Int max_value, sistab::Rng& rng) {
  TableVector t(cells);
  for (auto& v : t) v = sistab::uniform_int(rng, 0, max_value);
  return t;
}

}  // namespace testutil
