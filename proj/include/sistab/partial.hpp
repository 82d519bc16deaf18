#pragma once

#include <utility>
#include <vector>

#include "sistab/model.hpp"

namespace sistab {

/// A fiber together with values already fixed for the leading cells and
/// the residual margin b - sum a_j x*_j.  A negative residual entry means
/// the prefix is already infeasible; constructors reject it outright.
class PartialAssignment {
 public:
  explicit PartialAssignment(const FiberSpec& fiber)
      : fiber_(&fiber), residual_(fiber.margin) {
    check_residual();
  }

  PartialAssignment(const FiberSpec& fiber, std::vector<Int> prefix)
      : fiber_(&fiber), prefix_(std::move(prefix)), residual_(fiber.margin) {
    if (prefix_.size() >= fiber.cells()) {
      throw InvalidInput("PartialAssignment: prefix must leave at least one free cell");
    }
    const auto& a = fiber.matrix;
    for (std::size_t j = 0; j < prefix_.size(); ++j) {
      if (prefix_[j] < 0) {
        throw InvalidInput("PartialAssignment: prefix values must be nonnegative");
      }
      for (std::size_t r = 0; r < a.rows(); ++r) {
        residual_[r] = checked_sub(residual_[r], checked_mul(a.at(r, j), prefix_[j]));
      }
    }
    check_residual();
  }

  const FiberSpec& fiber() const { return *fiber_; }
  const std::vector<Int>& prefix() const { return prefix_; }
  const std::vector<Int>& residual() const { return residual_; }

  /// Index of the next cell to be sampled (0-based).
  std::size_t next_cell() const { return prefix_.size(); }

  /// New state with the next cell fixed to `value`.
  PartialAssignment extended(Int value) const {
    auto prefix = prefix_;
    prefix.push_back(value);
    return PartialAssignment(*fiber_, std::move(prefix));
  }

 private:
  void check_residual() const {
    for (Int r : residual_) {
      if (r < 0) {
        throw InvalidInput("PartialAssignment: prefix makes the residual margin negative");
      }
    }
  }

  const FiberSpec* fiber_;
  std::vector<Int> prefix_;
  std::vector<Int> residual_;
};

}  // namespace sistab
