#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <thread>
#include <utility>
#include <vector>

#include "sistab/bounds.hpp"
#include "sistab/enumerate.hpp"
#include "sistab/model.hpp"
#include "sistab/rng.hpp"

namespace sistab {

enum class SamplerKind { classical, rejection_free };

struct SISConfig {
  BoundMethod method = BoundMethod::exact_ip;  // ignored by rejection_free
  SamplerKind sampler = SamplerKind::classical;
  std::int64_t samples = 100;
  std::uint64_t seed = kDefaultSeed;
  /// Cell sampling order as a permutation of 0..k-1; empty = model order.
  std::vector<std::size_t> cell_order;
  int workers = 1;
};

/// One sequential draw.  `weight` is the exact big-integer 1/q(n): the
/// product of interval widths (classical) or support sizes (rejection-free)
/// over the cells sampled before completion or rejection.
struct SampleDraw {
  std::optional<TableVector> table;      // nullopt when rejected
  std::optional<std::size_t> rejected_at;  // position in sampling order;
                                           // == k means the final margin check failed
  BigInt weight = 1;
  double log10_weight = 0.0;
  /// Per-cell (interval-or-support size, chosen value), in sampling order.
  std::vector<std::pair<Int, Int>> trace;

  bool completed() const { return table.has_value(); }
};

struct CountEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  double log10_estimate = -std::numeric_limits<double>::infinity();
  std::int64_t samples = 0;
  std::int64_t rejections = 0;
  /// Set when the exact statistics exceed double range; log10_estimate
  /// stays finite and authoritative.
  bool log_domain = false;
};

namespace detail {

inline DesignMatrix permute_columns(const DesignMatrix& a,
                                    const std::vector<std::size_t>& order) {
  std::vector<Int> entries(a.rows() * a.cols());
  for (std::size_t j = 0; j < a.cols(); ++j) {
    for (std::size_t r = 0; r < a.rows(); ++r) {
      entries[r * a.cols() + j] = a.at(r, order[j]);
    }
  }
  return DesignMatrix(a.rows(), a.cols(), std::move(entries));
}

inline void validate_order(const std::vector<std::size_t>& order, std::size_t k) {
  if (order.empty()) return;
  if (order.size() != k) throw InvalidInput("cell_order: wrong length");
  std::vector<char> seen(k, 0);
  for (std::size_t j : order) {
    if (j >= k || seen[j]) throw InvalidInput("cell_order: not a permutation");
    seen[j] = 1;
  }
}

/// Sampling workspace: the (possibly column-permuted) fiber plus a shared
/// search engine.  One per worker; reusing it across draws lets the
/// feasibility memo amortize over a whole estimation run.
class SamplerContext {
 public:
  SamplerContext(const FiberSpec& fiber, const SISConfig& config)
      : order_(config.cell_order) {
    validate_order(order_, fiber.cells());
    if (order_.empty()) {
      fiber_ = &fiber;
    } else {
      permuted_.emplace(permute_columns(fiber.matrix, order_), fiber.margin);
      fiber_ = &*permuted_;
    }
    engine_.emplace(fiber_->matrix);
  }

  const FiberSpec& sampling_fiber() const { return *fiber_; }
  FiberSearch& engine() { return *engine_; }

  /// Map a table sampled in sampling order back to model order.
  TableVector unpermute(const TableVector& t) const {
    if (order_.empty()) return t;
    TableVector out(t.size());
    for (std::size_t j = 0; j < t.size(); ++j) out[order_[j]] = t[j];
    return out;
  }

 private:
  std::vector<std::size_t> order_;
  const FiberSpec* fiber_ = nullptr;
  std::optional<FiberSpec> permuted_;
  std::optional<FiberSearch> engine_;
};

inline SampleDraw sample_classical_impl(SamplerContext& ctx, const SISConfig& config,
                                        Rng& rng) {
  const FiberSpec& fiber = ctx.sampling_fiber();
  const auto& a = fiber.matrix;
  const std::size_t k = fiber.cells();
  SampleDraw draw;
  std::vector<Int> residual = fiber.margin;
  TableVector values;
  values.reserve(k);

  for (std::size_t cell = 0; cell < k; ++cell) {
    CellBounds cb;
    if (config.method == BoundMethod::exact_ip) {
      cb.method = BoundMethod::exact_ip;
      const auto lo = ctx.engine().min_value(cell, residual);
      if (lo) {
        cb.lower = *lo;
        cb.upper = *ctx.engine().max_value(cell, residual);
        cb.empty = false;
      }
    } else {
      // Rebuild a state view; the LP path has no engine to share.
      PartialAssignment state(fiber, values);
      cb = bounds_lp(state, cell);
    }
    if (cb.empty) {
      draw.rejected_at = cell;
      draw.log10_weight = log10_big(draw.weight);
      return draw;
    }
    const Int v = uniform_int(rng, cb.lower, cb.upper);
    draw.weight *= cb.width();
    draw.trace.emplace_back(cb.width(), v);
    values.push_back(v);
    for (std::size_t r = 0; r < a.rows(); ++r) residual[r] -= a.at(r, cell) * v;
  }

  TableVector table = ctx.unpermute(values);
  if (!std::all_of(residual.begin(), residual.end(), [](Int r) { return r == 0; })) {
    draw.rejected_at = k;  // complete draw failed the final margin check
    draw.log10_weight = log10_big(draw.weight);
    return draw;
  }
  draw.table = std::move(table);
  draw.log10_weight = log10_big(draw.weight);
  return draw;
}

inline SampleDraw sample_rejection_free_impl(SamplerContext& ctx, Rng& rng) {
  const FiberSpec& fiber = ctx.sampling_fiber();
  const auto& a = fiber.matrix;
  const std::size_t k = fiber.cells();
  SampleDraw draw;
  std::vector<Int> residual = fiber.margin;
  TableVector values;
  values.reserve(k);

  for (std::size_t cell = 0; cell < k; ++cell) {
    const auto support = ctx.engine().support(cell, residual);
    if (support.empty()) {
      if (cell == 0) {
        throw EmptyFiberError("rejection-free sampler: fiber is empty");
      }
      // Sampling inside supports keeps every prefix completable.
      throw std::logic_error("rejection-free sampler: support vanished mid-draw");
    }
    const Int v = support[static_cast<std::size_t>(
        uniform_int(rng, 0, static_cast<Int>(support.size()) - 1))];
    draw.weight *= static_cast<Int>(support.size());
    draw.trace.emplace_back(static_cast<Int>(support.size()), v);
    values.push_back(v);
    for (std::size_t r = 0; r < a.rows(); ++r) residual[r] -= a.at(r, cell) * v;
  }

  draw.table = ctx.unpermute(values);
  draw.log10_weight = log10_big(draw.weight);
  return draw;
}

}  // namespace detail

/// Algorithm-1 style draw: per cell, compute [l_i, u_i] with the configured
/// bound method, draw uniformly from the interval, multiply the weight by
/// its width.  Rejection (a value, not an error) happens when a bound
/// computation comes back empty or the completed table misses the margin.
inline SampleDraw sample_classical(const FiberSpec& fiber, const SISConfig& config,
                                   Rng& rng) {
  detail::SamplerContext ctx(fiber, config);
  return detail::sample_classical_impl(ctx, config, rng);
}

/// Rejection-free draw: per cell, draw uniformly from the exact support and
/// multiply the weight by the support size.  The returned table is always
/// in the fiber and its draw probability is exactly 1/weight.
inline SampleDraw sample_rejection_free(const FiberSpec& fiber, const SISConfig& config,
                                        Rng& rng) {
  detail::SamplerContext ctx(fiber, config);
  return detail::sample_rejection_free_impl(ctx, rng);
}

/// Unbiased importance estimate of |F_T|: mean over N iid draws of the
/// indicator-weighted 1/q(n), rejected draws contributing zero.  All
/// per-draw weights are exact big integers; the mean and variance are
/// aggregated exactly and only converted to double at the end.
///
/// Draw i always uses RNG substream (seed, i), so the result is
/// bit-identical for any worker count.
inline CountEstimate estimate_count(const FiberSpec& fiber, const SISConfig& config) {
  if (config.samples < 1) throw InvalidInput("estimate_count: samples must be >= 1");
  const std::int64_t n = config.samples;

  if (config.sampler == SamplerKind::rejection_free) {
    detail::SamplerContext probe(fiber, config);
    if (!probe.engine().feasible(0, probe.sampling_fiber().margin)) {
      throw EmptyFiberError("estimate_count: fiber is empty");
    }
  }

  std::vector<BigInt> contribution(static_cast<std::size_t>(n));
  std::vector<char> rejected(static_cast<std::size_t>(n), 0);

  const int workers = std::max(1, config.workers);
  auto run_range = [&](std::int64_t begin, std::int64_t end) {
    detail::SamplerContext ctx(fiber, config);
    for (std::int64_t i = begin; i < end; ++i) {
      Rng rng = substream(config.seed, static_cast<std::uint64_t>(i));
      SampleDraw draw = config.sampler == SamplerKind::classical
                            ? detail::sample_classical_impl(ctx, config, rng)
                            : detail::sample_rejection_free_impl(ctx, rng);
      if (draw.completed()) {
        contribution[static_cast<std::size_t>(i)] = std::move(draw.weight);
      } else {
        rejected[static_cast<std::size_t>(i)] = 1;
      }
    }
  };

  if (workers == 1 || n < std::int64_t(2) * workers) {
    run_range(0, n);
  } else {
    std::vector<std::thread> pool;
    const std::int64_t chunk = (n + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const std::int64_t begin = std::int64_t(w) * chunk;
      const std::int64_t end = std::min(n, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(run_range, begin, end);
    }
    for (auto& t : pool) t.join();
  }

  // Exact aggregation in draw-index order.
  BigInt sum = 0, sum_sq = 0;
  std::int64_t rejections = 0;
  for (std::int64_t i = 0; i < n; ++i) {
    const auto& w = contribution[static_cast<std::size_t>(i)];
    sum += w;
    sum_sq += w * w;
    rejections += rejected[static_cast<std::size_t>(i)];
  }

  CountEstimate out;
  out.samples = n;
  out.rejections = rejections;
  const Rational mean(sum, BigInt(n));
  // Population variance of the contributions, divided by N once more for
  // the standard error of the mean.
  const Rational var_mean =
      Rational(BigInt(n) * sum_sq - sum * sum, BigInt(n) * BigInt(n) * BigInt(n));
  out.estimate = rat_to_double(mean);
  out.std_error = var_mean > 0 ? std::sqrt(rat_to_double(var_mean)) : 0.0;
  out.log10_estimate = sum > 0
                           ? log10_big(sum) - std::log10(static_cast<double>(n))
                           : -std::numeric_limits<double>::infinity();
  if (!std::isfinite(out.estimate) || !std::isfinite(out.std_error)) {
    out.log_domain = true;
    if (var_mean > 0 && !std::isfinite(out.std_error)) {
      // sqrt in log space keeps the magnitude honest even off the double scale
      out.std_error = std::numeric_limits<double>::infinity();
    }
  }
  return out;
}

/// Fraction of N draws the configured sampler rejects.
inline double rejection_rate(const FiberSpec& fiber, const SISConfig& config) {
  const CountEstimate e = estimate_count(fiber, config);
  return static_cast<double>(e.rejections) / static_cast<double>(e.samples);
}

}  // namespace sistab
