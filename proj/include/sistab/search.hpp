#pragma once

#include <cstdint>
#include <numeric>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "sistab/model.hpp"
#include "sistab/rng.hpp"

namespace sistab {

/// Exact depth-first search over the cells of a fiber, in index order,
/// with residual-margin pruning.  Answers feasibility, counting, support
/// and min/max questions about nonnegative-integer completions of a
/// partial table.  Subproblem results are memoized on (cell, residual),
/// so repeated queries against the same matrix amortize well.
///
/// Not thread-safe; use one instance per worker.
class FiberSearch {
 public:
  static constexpr std::uint64_t kDefaultNodeBudget = 100'000'000;

  explicit FiberSearch(DesignMatrix matrix,
                       std::uint64_t node_budget = kDefaultNodeBudget)
      : a_(std::move(matrix)),
        d_(a_.rows()),
        k_(a_.cols()),
        node_budget_(node_budget) {
    // Static per-suffix row data: gcd of row coefficients over columns >= j
    // (0 when the row has no support there, i.e. the residual must be 0).
    gcd_from_.assign(k_ + 1, std::vector<Int>(d_, 0));
    std::vector<std::vector<int>> nnz_from(k_ + 1, std::vector<int>(d_, 0));
    for (std::size_t j = k_; j-- > 0;) {
      for (std::size_t r = 0; r < d_; ++r) {
        gcd_from_[j][r] = std::gcd(gcd_from_[j + 1][r], a_.at(r, j));
        nnz_from[j][r] = nnz_from[j + 1][r] + (a_.at(r, j) != 0 ? 1 : 0);
      }
    }
    std::vector<int> col_row_count(k_, 0);
    std::vector<std::size_t> row_last_col(d_, 0);
    for (std::size_t r = 0; r < d_; ++r) {
      for (std::size_t j = 0; j < k_; ++j) {
        if (a_.at(r, j) != 0) {
          ++col_row_count[j];
          row_last_col[r] = j;
        }
      }
    }
    // Memo keys carry only rows whose residual can still steer the tail.
    // A row is dropped when it has no remaining support (residual must be 0,
    // checked separately) or when it is isolated: one remaining column that
    // no other row touches, so the column absorbs any divisible residual.
    key_rows_.assign(k_ + 1, {});
    for (std::size_t j = 0; j <= k_; ++j) {
      for (std::size_t r = 0; r < d_; ++r) {
        if (gcd_from_[j][r] == 0) continue;
        if (nnz_from[j][r] == 1 && col_row_count[row_last_col[r]] == 1) continue;
        key_rows_[j].push_back(r);
      }
    }
  }

  const DesignMatrix& matrix() const { return a_; }

  void set_node_budget(std::uint64_t budget) { node_budget_ = budget; }
  std::uint64_t nodes_used() const { return nodes_; }
  void reset_node_counter() { nodes_ = 0; }

  /// Does A[:, first_cell..] x = residual admit a nonnegative integer x?
  bool feasible(std::size_t first_cell, const std::vector<Int>& residual) {
    check_dims(first_cell, residual);
    for (Int r : residual) {
      if (r < 0) return false;
    }
    scratch_ = residual;
    return feasible_rec(first_cell);
  }

  /// Exact number of nonnegative integer solutions of the suffix system.
  BigInt count(std::size_t first_cell, const std::vector<Int>& residual) {
    check_dims(first_cell, residual);
    for (Int r : residual) {
      if (r < 0) return 0;
    }
    scratch_ = residual;
    return count_rec(first_cell);
  }

  /// All values v of `cell` that leave a nonempty integer fiber, ascending.
  std::vector<Int> support(std::size_t cell, const std::vector<Int>& residual) {
    check_dims(cell, residual);
    if (cell >= k_) throw InvalidInput("support: cell out of range");
    std::vector<Int> values;
    for (Int r : residual) {
      if (r < 0) return values;
    }
    scratch_ = residual;
    const auto [lo, hi] = value_window(cell);
    for (Int v = lo; v <= hi; ++v) {
      if (probe(cell, v)) values.push_back(v);
    }
    return values;
  }

  /// Smallest feasible value of `cell`, or nullopt if none exists.
  std::optional<Int> min_value(std::size_t cell, const std::vector<Int>& residual) {
    check_dims(cell, residual);
    if (cell >= k_) throw InvalidInput("min_value: cell out of range");
    for (Int r : residual) {
      if (r < 0) return std::nullopt;
    }
    scratch_ = residual;
    const auto [lo, hi] = value_window(cell);
    for (Int v = lo; v <= hi; ++v) {
      if (probe(cell, v)) return v;
    }
    return std::nullopt;
  }

  std::optional<Int> max_value(std::size_t cell, const std::vector<Int>& residual) {
    check_dims(cell, residual);
    if (cell >= k_) throw InvalidInput("max_value: cell out of range");
    for (Int r : residual) {
      if (r < 0) return std::nullopt;
    }
    scratch_ = residual;
    const auto [lo, hi] = value_window(cell);
    for (Int v = hi; v >= lo; --v) {
      if (probe(cell, v)) return v;
    }
    return std::nullopt;
  }

  /// Materialize every solution of the suffix system (prefix supplied by
  /// the caller is prepended to each table).  Only called when the count
  /// is known to be small.
  void enumerate(std::size_t first_cell, const std::vector<Int>& residual,
                 const TableVector& prefix, std::vector<TableVector>& out) {
    check_dims(first_cell, residual);
    for (Int r : residual) {
      if (r < 0) return;
    }
    scratch_ = residual;
    TableVector partial = prefix;
    enumerate_rec(first_cell, partial, out);
  }

 private:
  void check_dims(std::size_t first_cell, const std::vector<Int>& residual) const {
    if (first_cell > k_) throw InvalidInput("FiberSearch: cell index out of range");
    if (residual.size() != d_) {
      throw InvalidInput("FiberSearch: residual length does not match matrix rows");
    }
  }

  void bump_nodes() {
    if (++nodes_ > node_budget_) {
      throw ResourceLimit("search node budget of " + std::to_string(node_budget_) +
                          " exceeded after visiting " + std::to_string(nodes_ - 1) +
                          " nodes");
    }
  }

  // Divisibility and dead-row screen for the suffix starting at `cell`.
  bool rows_consistent(std::size_t cell) const {
    for (std::size_t r = 0; r < d_; ++r) {
      const Int g = gcd_from_[cell][r];
      const Int res = scratch_[r];
      if (g == 0) {
        if (res != 0) return false;
      } else if (res % g != 0) {
        return false;
      }
    }
    return true;
  }

  // Largest value of `cell` allowed by the residual alone.
  Int value_cap(std::size_t cell) const {
    Int cap = std::numeric_limits<Int>::max();
    for (std::size_t r = 0; r < d_; ++r) {
      const Int a = a_.at(r, cell);
      if (a > 0) cap = std::min(cap, scratch_[r] / a);
    }
    return cap;  // finite: no all-zero column
  }

  // Necessary window [lo, hi] for the value of `cell`: hi from the residual
  // caps, lo from demanding that the later cells can still absorb what the
  // value leaves behind (using their current caps, a valid relaxation).
  std::pair<Int, Int> value_window(std::size_t cell) const {
    const Int hi = value_cap(cell);
    std::vector<Int> caps(k_ - cell - 1);
    for (std::size_t c = cell + 1; c < k_; ++c) caps[c - cell - 1] = value_cap(c);
    Int lo = 0;
    for (std::size_t r = 0; r < d_; ++r) {
      const Int a = a_.at(r, cell);
      if (a == 0) continue;
      Int tail = 0;
      bool unbounded = false;
      for (std::size_t c = cell + 1; c < k_; ++c) {
        const Int coeff = a_.at(r, c);
        if (coeff == 0) continue;
        Int term;
        if (__builtin_mul_overflow(coeff, caps[c - cell - 1], &term) ||
            __builtin_add_overflow(tail, term, &tail)) {
          unbounded = true;
          break;
        }
      }
      if (unbounded) continue;
      const Int deficit = scratch_[r] - tail;  // must be covered by a*v
      if (deficit > 0) {
        lo = std::max(lo, (deficit + a - 1) / a);
      }
    }
    return {lo, hi};
  }

  // Feasibility of the suffix after fixing `cell` to v; restores scratch_.
  bool probe(std::size_t cell, Int v) {
    push(cell, v);
    const bool ok = feasible_rec(cell + 1);
    pop(cell, v);
    return ok;
  }

  void push(std::size_t cell, Int v) {
    for (std::size_t r = 0; r < d_; ++r) scratch_[r] -= a_.at(r, cell) * v;
  }
  void pop(std::size_t cell, Int v) {
    for (std::size_t r = 0; r < d_; ++r) scratch_[r] += a_.at(r, cell) * v;
  }

  // Valid only after rows_consistent(cell) has accepted the state: rows not
  // in the key are either zero-forced or isolated-divisible there.
  std::vector<Int> memo_key(std::size_t cell) const {
    const auto& rows = key_rows_[cell];
    std::vector<Int> key;
    key.reserve(rows.size() + 1);
    key.push_back(static_cast<Int>(cell));
    for (std::size_t r : rows) key.push_back(scratch_[r]);
    return key;
  }

  bool feasible_rec(std::size_t cell) {
    bump_nodes();
    if (!rows_consistent(cell)) return false;
    if (cell == k_) return true;  // residual fully consumed
    auto key = memo_key(cell);
    if (auto it = feas_memo_.find(key); it != feas_memo_.end()) return it->second;

    const auto [lo, hi] = value_window(cell);
    bool ok = false;
    // Descending: saturating greedily reaches a witness fast on margin-style rows.
    for (Int v = hi; v >= lo; --v) {
      if (probe(cell, v)) { ok = true; break; }
    }
    remember(feas_memo_, std::move(key), ok);
    return ok;
  }

  BigInt count_rec(std::size_t cell) {
    bump_nodes();
    if (!rows_consistent(cell)) return 0;
    if (cell == k_) return 1;
    auto key = memo_key(cell);
    if (auto it = count_memo_.find(key); it != count_memo_.end()) return it->second;

    const auto [lo, hi] = value_window(cell);
    BigInt total = 0;
    for (Int v = lo; v <= hi; ++v) {
      push(cell, v);
      total += count_rec(cell + 1);
      pop(cell, v);
    }
    remember(count_memo_, std::move(key), total);
    return total;
  }

  void enumerate_rec(std::size_t cell, TableVector& partial,
                     std::vector<TableVector>& out) {
    bump_nodes();
    if (!rows_consistent(cell)) return;
    if (cell == k_) {
      out.push_back(partial);
      return;
    }
    const auto [lo, hi] = value_window(cell);
    for (Int v = lo; v <= hi; ++v) {
      push(cell, v);
      partial.push_back(v);
      enumerate_rec(cell + 1, partial, out);
      partial.pop_back();
      pop(cell, v);
    }
  }

  struct KeyHash {
    std::size_t operator()(const std::vector<Int>& key) const {
      std::uint64_t h = 0x9E3779B97F4A7C15ull ^ key.size();
      for (Int x : key) h = mix64(h ^ static_cast<std::uint64_t>(x));
      return static_cast<std::size_t>(h);
    }
  };

  template <typename Map, typename Value>
  void remember(Map& memo, std::vector<Int>&& key, Value&& value) {
    // Keeps memory bounded on very long sampling sessions; correctness is
    // unaffected, only amortization resets.
    if (memo.size() >= kMemoEntryCap) memo.clear();
    memo.emplace(std::move(key), std::forward<Value>(value));
  }

  static constexpr std::size_t kMemoEntryCap = 1u << 22;

  DesignMatrix a_;
  std::size_t d_, k_;
  std::vector<std::vector<Int>> gcd_from_;
  std::vector<std::vector<std::size_t>> key_rows_;
  std::vector<Int> scratch_;
  std::unordered_map<std::vector<Int>, bool, KeyHash> feas_memo_;
  std::unordered_map<std::vector<Int>, BigInt, KeyHash> count_memo_;
  std::uint64_t node_budget_;
  std::uint64_t nodes_ = 0;
};

}  // namespace sistab
