#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "sistab/partial.hpp"
#include "sistab/search.hpp"

namespace sistab {

/// Exact fiber cardinality, with the explicit table list when it is small
/// enough to materialize.
struct FiberCount {
  BigInt count;
  std::optional<std::vector<TableVector>> tables;
};

/// Exact |F_T| by exhaustive search; the reference value every estimator
/// in this library is tested against.  Exponential by design — intended
/// for desk-scale fibers.  When `cap` is given and count <= cap, the
/// explicit list of tables is returned as well.
inline FiberCount count_fiber(const FiberSpec& fiber,
                              std::optional<Int> cap = std::nullopt,
                              std::uint64_t node_budget = FiberSearch::kDefaultNodeBudget) {
  FiberSearch engine(fiber.matrix, node_budget);
  FiberCount out{engine.count(0, fiber.margin), std::nullopt};
  if (cap && out.count <= BigInt(*cap)) {
    std::vector<TableVector> tables;
    engine.enumerate(0, fiber.margin, {}, tables);
    out.tables = std::move(tables);
  }
  return out;
}

/// Exact support of the next cell: every value that leaves a nonempty
/// integer fiber.  An empty result means the current prefix is infeasible.
inline std::vector<Int> cell_support(const PartialAssignment& state, std::size_t cell,
                                     FiberSearch* engine = nullptr) {
  if (cell >= state.fiber().cells()) {
    throw InvalidInput("cell_support: cell index out of range");
  }
  if (cell != state.next_cell()) {
    throw InvalidInput("cell_support: cell must be the next unfixed index");
  }
  std::optional<FiberSearch> local;
  if (engine == nullptr) {
    local.emplace(state.fiber().matrix);
    engine = &*local;
  }
  return engine->support(cell, state.residual());
}

}  // namespace sistab
