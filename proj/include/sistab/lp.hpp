#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "sistab/model.hpp"

namespace sistab {

enum class LpStatus { optimal, infeasible, unbounded };

struct LpResult {
  LpStatus status;
  Rational value;                  // meaningful only when status == optimal
  std::vector<Rational> solution;  // an optimal point, same indexing as the columns
};

/// Two-phase primal simplex over exact rationals with Bland's rule.
/// Solves  extremize x[obj]  s.t.  M x = rhs, x >= 0,  where M is given
/// column-wise.  No floating point anywhere, so ceil/floor rounding of the
/// optimum is bit-exact.
class RationalSimplex {
 public:
  RationalSimplex(std::vector<std::vector<Rational>> columns,
                  std::vector<Rational> rhs)
      : cols_(std::move(columns)), b_(std::move(rhs)) {
    m_ = b_.size();
    n_ = cols_.size();
    for (const auto& c : cols_) {
      if (c.size() != m_) throw InvalidInput("RationalSimplex: ragged columns");
    }
    // Normalize to b >= 0 so phase 1 artificials start feasible.
    for (std::size_t r = 0; r < m_; ++r) {
      if (b_[r] < 0) {
        b_[r] = -b_[r];
        for (auto& c : cols_) c[r] = -c[r];
      }
    }
  }

  bool feasible() { return phase1(); }

  LpResult extremize(std::size_t obj, bool maximize) {
    if (obj >= n_) throw InvalidInput("RationalSimplex: objective column out of range");
    if (!phase1()) return {LpStatus::infeasible, Rational(0), {}};
    // Phase 2: min c.x with c = +/- e_obj.
    std::vector<Rational> cost(n_, Rational(0));
    cost[obj] = maximize ? Rational(-1) : Rational(1);
    if (!optimize(cost)) return {LpStatus::unbounded, Rational(0), {}};
    std::vector<Rational> point(n_, Rational(0));
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      if (basis_[r] < n_) point[basis_[r]] = rhs_[r];
    }
    return {LpStatus::optimal, point[obj], std::move(point)};
  }

 private:
  // --- tableau state (valid after phase1) ---
  // rows_[r] has n_ + artificial columns; basis_[r] is the basic column of row r.
  std::vector<std::vector<Rational>> rows_;
  std::vector<Rational> rhs_;
  std::vector<std::size_t> basis_;
  std::size_t total_cols_ = 0;

  std::vector<std::vector<Rational>> cols_;
  std::vector<Rational> b_;
  std::size_t m_ = 0, n_ = 0;
  bool phase1_done_ = false;
  bool phase1_feasible_ = false;

  void pivot(std::size_t prow, std::size_t pcol) {
    auto& row = rows_[prow];
    const Rational inv = Rational(1) / row[pcol];
    for (auto& x : row) x *= inv;
    rhs_[prow] *= inv;
    row[pcol] = 1;  // kill drift from the scaled division
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      if (r == prow) continue;
      const Rational f = rows_[r][pcol];
      if (f == 0) continue;
      for (std::size_t c = 0; c < total_cols_; ++c) rows_[r][c] -= f * row[c];
      rhs_[r] -= f * rhs_[prow];
      rows_[r][pcol] = 0;
    }
    basis_[prow] = pcol;
  }

  // Bland's rule keeps the pivot sequence finite.
  bool optimize(const std::vector<Rational>& cost) {
    for (;;) {
      std::size_t enter = total_cols_;
      for (std::size_t j = 0; j < total_cols_; ++j) {
        Rational reduced = j < cost.size() ? cost[j] : Rational(0);
        for (std::size_t r = 0; r < rows_.size(); ++r) {
          const std::size_t bj = basis_[r];
          const Rational cb = bj < cost.size() ? cost[bj] : Rational(0);
          if (cb != 0) reduced -= cb * rows_[r][j];
        }
        if (reduced < 0) { enter = j; break; }
      }
      if (enter == total_cols_) return true;  // optimal

      std::size_t leave = rows_.size();
      Rational best_ratio = 0;
      for (std::size_t r = 0; r < rows_.size(); ++r) {
        if (rows_[r][enter] <= 0) continue;
        const Rational ratio = rhs_[r] / rows_[r][enter];
        if (leave == rows_.size() || ratio < best_ratio ||
            (ratio == best_ratio && basis_[r] < basis_[leave])) {
          leave = r;
          best_ratio = ratio;
        }
      }
      if (leave == rows_.size()) return false;  // unbounded
      pivot(leave, enter);
    }
  }

  bool phase1() {
    if (phase1_done_) return phase1_feasible_;
    phase1_done_ = true;

    total_cols_ = n_ + m_;
    rows_.assign(m_, std::vector<Rational>(total_cols_, Rational(0)));
    rhs_ = b_;
    basis_.resize(m_);
    for (std::size_t r = 0; r < m_; ++r) {
      for (std::size_t j = 0; j < n_; ++j) rows_[r][j] = cols_[j][r];
      rows_[r][n_ + r] = 1;
      basis_[r] = n_ + r;
    }
    std::vector<Rational> cost(total_cols_, Rational(0));
    for (std::size_t j = n_; j < total_cols_; ++j) cost[j] = 1;
    optimize(cost);  // bounded below by 0, can't be unbounded

    Rational artificial_mass = 0;
    for (std::size_t r = 0; r < m_; ++r) {
      if (basis_[r] >= n_) artificial_mass += rhs_[r];
    }
    if (artificial_mass != 0) {
      phase1_feasible_ = false;
      return false;
    }

    // Drive zero-valued artificials out of the basis; rows where that is
    // impossible are redundant equations and get dropped.
    for (std::size_t r = 0; r < rows_.size();) {
      if (basis_[r] < n_) { ++r; continue; }
      std::size_t enter = n_;
      for (std::size_t j = 0; j < n_; ++j) {
        if (rows_[r][j] != 0) { enter = j; break; }
      }
      if (enter < n_) {
        pivot(r, enter);
        ++r;
      } else {
        const auto at = static_cast<std::ptrdiff_t>(r);
        rows_.erase(rows_.begin() + at);
        rhs_.erase(rhs_.begin() + at);
        basis_.erase(basis_.begin() + at);
      }
    }
    // Artificial columns stay in the tableau but can never re-enter: the
    // phase-2 costs give them reduced cost 0 and Bland picks negatives only.
    for (auto& row : rows_) {
      for (std::size_t j = n_; j < total_cols_; ++j) row[j] = 0;
    }
    phase1_feasible_ = true;
    return true;
  }
};

/// Rational feasibility of A[:, first_cell..] x = rhs, x >= 0.
inline bool lp_feasible(const DesignMatrix& a, std::size_t first_cell,
                        const std::vector<Int>& rhs) {
  if (rhs.size() != a.rows()) throw InvalidInput("lp_feasible: rhs length mismatch");
  std::vector<std::vector<Rational>> cols;
  cols.reserve(a.cols() - first_cell);
  for (std::size_t j = first_cell; j < a.cols(); ++j) {
    std::vector<Rational> col(a.rows());
    for (std::size_t r = 0; r < a.rows(); ++r) col[r] = a.at(r, j);
    cols.push_back(std::move(col));
  }
  std::vector<Rational> b(rhs.begin(), rhs.end());
  return RationalSimplex(std::move(cols), std::move(b)).feasible();
}

/// Exact LP optimum of x[cell] over { A[:, first_cell..] x = rhs, x >= 0 }.
inline LpResult lp_extremize_cell(const DesignMatrix& a, std::size_t first_cell,
                                  const std::vector<Int>& rhs, std::size_t cell,
                                  bool maximize) {
  if (cell < first_cell || cell >= a.cols()) {
    throw InvalidInput("lp_extremize_cell: cell out of range");
  }
  std::vector<std::vector<Rational>> cols;
  cols.reserve(a.cols() - first_cell);
  for (std::size_t j = first_cell; j < a.cols(); ++j) {
    std::vector<Rational> col(a.rows());
    for (std::size_t r = 0; r < a.rows(); ++r) col[r] = a.at(r, j);
    cols.push_back(std::move(col));
  }
  std::vector<Rational> b(rhs.begin(), rhs.end());
  RationalSimplex simplex(std::move(cols), std::move(b));
  return simplex.extremize(cell - first_cell, maximize);
}

}  // namespace sistab
