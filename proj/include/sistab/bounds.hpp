#pragma once

#include <optional>

#include "sistab/lp.hpp"
#include "sistab/partial.hpp"
#include "sistab/search.hpp"

namespace sistab {

enum class BoundMethod { exact_ip, lp_relaxation };

/// Feasible interval [lower, upper] for the next cell of a partial table.
/// With exact-ip both endpoints are attained by integer completions; with
/// lp-relaxation they are ceil/floor of the exact rational LP optima and
/// may be strictly looser.  `empty` is set when no feasible value exists
/// (for LP: infeasible relaxation or an inverted rounded interval).
struct CellBounds {
  Int lower = 0;
  Int upper = 0;
  BoundMethod method = BoundMethod::exact_ip;
  bool empty = true;

  Int width() const { return empty ? 0 : upper - lower + 1; }
};

namespace detail {
inline void require_next_cell(const PartialAssignment& state, std::size_t cell,
                              const char* op) {
  if (cell >= state.fiber().cells()) {
    throw InvalidInput(std::string(op) + ": cell index out of range");
  }
  if (cell != state.next_cell()) {
    throw InvalidInput(std::string(op) + ": cell must be the next unfixed index");
  }
}
}  // namespace detail

/// Exact integer min/max of x_cell over all nonnegative-integer completions
/// satisfying the residual margin.  Pass an engine to share its memo across
/// calls on the same matrix.
inline CellBounds bounds_exact_ip(const PartialAssignment& state, std::size_t cell,
                                  FiberSearch* engine = nullptr) {
  detail::require_next_cell(state, cell, "bounds_exact_ip");
  std::optional<FiberSearch> local;
  if (engine == nullptr) {
    local.emplace(state.fiber().matrix);
    engine = &*local;
  }
  CellBounds out;
  out.method = BoundMethod::exact_ip;
  const auto lo = engine->min_value(cell, state.residual());
  if (!lo) return out;
  const auto hi = engine->max_value(cell, state.residual());
  out.lower = *lo;
  out.upper = *hi;
  out.empty = false;
  return out;
}

/// ceil(LP min) and floor(LP max) of x_cell over the real relaxation,
/// solved in exact rational arithmetic.
inline CellBounds bounds_lp(const PartialAssignment& state, std::size_t cell) {
  detail::require_next_cell(state, cell, "bounds_lp");
  CellBounds out;
  out.method = BoundMethod::lp_relaxation;
  const auto& a = state.fiber().matrix;
  const auto& r = state.residual();
  const auto mn = lp_extremize_cell(a, cell, r, cell, /*maximize=*/false);
  if (mn.status == LpStatus::infeasible) return out;
  const auto mx = lp_extremize_cell(a, cell, r, cell, /*maximize=*/true);
  if (mx.status != LpStatus::optimal) {
    // Nonnegative matrices with no zero column keep every cell bounded.
    throw InvalidInput("bounds_lp: unbounded cell; matrix has an all-zero column?");
  }
  const BigInt lo = ceil_rat(mn.value);
  const BigInt hi = floor_rat(mx.value);
  if (lo > hi) return out;  // rounded interval inverted: no integer inside
  out.lower = to_int_checked(lo, "bounds_lp lower");
  out.upper = to_int_checked(hi, "bounds_lp upper");
  out.empty = false;
  return out;
}

inline CellBounds compute_bounds(const PartialAssignment& state, std::size_t cell,
                                 BoundMethod method, FiberSearch* engine = nullptr) {
  return method == BoundMethod::exact_ip ? bounds_exact_ip(state, cell, engine)
                                         : bounds_lp(state, cell);
}

}  // namespace sistab
