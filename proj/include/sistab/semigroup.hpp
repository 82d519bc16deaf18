#pragma once

#include <cstdlib>
#include <optional>
#include <utility>
#include <vector>

#include "sistab/lp.hpp"
#include "sistab/search.hpp"

namespace sistab {

/// Lattice L(A) generated over Z by the columns of A, reduced to column
/// echelon form by exact integer column operations (Hermite-style), so
/// membership is a forward substitution with divisibility checks.
class LatticeBasis {
 public:
  explicit LatticeBasis(const DesignMatrix& a) : d_(a.rows()) {
    std::vector<std::vector<BigInt>> cols(a.cols(), std::vector<BigInt>(d_));
    for (std::size_t j = 0; j < a.cols(); ++j) {
      for (std::size_t r = 0; r < d_; ++r) cols[j][r] = a.at(r, j);
    }
    std::size_t c = 0;
    for (std::size_t r = 0; r < d_ && c < cols.size(); ++r) {
      // gcd-eliminate row r across columns c..end until one survivor remains
      for (;;) {
        std::size_t smallest = cols.size();
        for (std::size_t j = c; j < cols.size(); ++j) {
          if (cols[j][r] == 0) continue;
          if (smallest == cols.size() ||
              abs(cols[j][r]) < abs(cols[smallest][r])) {
            smallest = j;
          }
        }
        if (smallest == cols.size()) break;  // row r is zero from c on
        bool others = false;
        for (std::size_t j = c; j < cols.size(); ++j) {
          if (j == smallest || cols[j][r] == 0) continue;
          others = true;
          const BigInt q = cols[j][r] / cols[smallest][r];
          for (std::size_t i = 0; i < d_; ++i) cols[j][i] -= q * cols[smallest][i];
        }
        if (!others) {
          std::swap(cols[c], cols[smallest]);
          if (cols[c][r] < 0) {
            for (auto& x : cols[c]) x = -x;
          }
          pivot_rows_.push_back(r);
          basis_.push_back(std::move(cols[c]));
          ++c;
          break;
        }
      }
    }
  }

  /// Is target an integer combination of the columns of A?
  bool contains(const std::vector<Int>& target) const {
    if (target.size() != d_) throw InvalidInput("LatticeBasis: dimension mismatch");
    std::vector<BigInt> res(target.begin(), target.end());
    std::size_t c = 0;
    for (std::size_t r = 0; r < d_; ++r) {
      if (c < basis_.size() && pivot_rows_[c] == r) {
        const BigInt& p = basis_[c][r];
        if (res[r] % p != 0) return false;
        const BigInt y = res[r] / p;
        if (y != 0) {
          for (std::size_t i = r; i < d_; ++i) res[i] -= y * basis_[c][i];
        }
        ++c;
      } else if (res[r] != 0) {
        return false;
      }
    }
    return true;
  }

 private:
  std::size_t d_;
  std::vector<std::size_t> pivot_rows_;
  std::vector<std::vector<BigInt>> basis_;
};

/// b in Q(A): does A x = b have a nonnegative-integer solution?
inline bool in_semigroup(const DesignMatrix& a, const std::vector<Int>& target,
                         FiberSearch* engine = nullptr) {
  if (target.size() != a.rows()) {
    throw InvalidInput("in_semigroup: target length does not match matrix rows");
  }
  std::optional<FiberSearch> local;
  if (engine == nullptr) {
    local.emplace(a);
    engine = &*local;
  }
  return engine->feasible(0, target);
}

/// b in Q_sat(A) = K(A) intersect L(A): rational-cone membership by exact
/// LP feasibility, lattice membership by integer column reduction.
inline bool in_saturation(const DesignMatrix& a, const std::vector<Int>& target,
                          const LatticeBasis* lattice = nullptr) {
  if (target.size() != a.rows()) {
    throw InvalidInput("in_saturation: target length does not match matrix rows");
  }
  std::optional<LatticeBasis> local;
  if (lattice == nullptr) {
    local.emplace(a);
    lattice = &*local;
  }
  return lattice->contains(target) && lp_feasible(a, 0, target);
}

struct SemigroupAnalysis {
  DesignMatrix matrix;
  std::vector<Int> box_bound;
  std::vector<std::vector<Int>> holes;  // lexicographic order
  bool saturated_in_box = true;
};

/// Enumerate the holes H = Q_sat \ Q inside the box 0..box_bound[i] per
/// coordinate.  Every reported hole is LP-feasible and lattice-consistent
/// yet has no nonnegative integer preimage — exactly the margins on which
/// interval-based SIS must reject.
inline SemigroupAnalysis holes_in_box(const DesignMatrix& a,
                                      const std::vector<Int>& box_bound) {
  if (box_bound.size() != a.rows()) {
    throw InvalidInput("holes_in_box: box bound length does not match matrix rows");
  }
  double volume = 1.0;
  for (Int b : box_bound) {
    if (b < 0) throw InvalidInput("holes_in_box: box bounds must be nonnegative");
    volume *= static_cast<double>(b) + 1.0;
    if (volume > 1e7) {
      throw ResourceLimit("holes_in_box: box exceeds 10^7 lattice points");
    }
  }

  SemigroupAnalysis out{a, box_bound, {}, true};
  LatticeBasis lattice(a);
  FiberSearch engine(a);
  std::vector<Int> b(a.rows(), 0);
  for (;;) {
    // Cheapest screens first; the LP runs only on lattice-consistent
    // points that are not already in the semigroup.
    if (lattice.contains(b) && !engine.feasible(0, b) && lp_feasible(a, 0, b)) {
      out.holes.push_back(b);
    }
    std::size_t i = b.size();
    while (i-- > 0) {
      if (b[i] < box_bound[i]) {
        ++b[i];
        break;
      }
      b[i] = 0;
      if (i == 0) {
        out.saturated_in_box = out.holes.empty();
        return out;
      }
    }
  }
}

}  // namespace sistab
