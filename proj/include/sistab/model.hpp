#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sistab/numeric.hpp"

namespace sistab {

/// A table is a vector of k nonnegative cell counts.
using TableVector = std::vector<Int>;

/// The d x k nonnegative integer matrix whose rows compute a model's
/// sufficient statistics from a vectorized table.  Immutable after
/// construction; safe to share across threads.
class DesignMatrix {
 public:
  DesignMatrix(std::size_t rows, std::size_t cols, std::vector<Int> entries)
      : d_(rows), k_(cols), a_(std::move(entries)) {
    if (d_ < 1) throw InvalidInput("DesignMatrix: rows must be >= 1");
    if (k_ < 1) throw InvalidInput("DesignMatrix: cols must be >= 1");
    if (a_.size() != d_ * k_) {
      throw InvalidInput("DesignMatrix: entries size does not match rows*cols");
    }
    for (Int e : a_) {
      if (e < 0) throw InvalidInput("DesignMatrix: entries must be nonnegative");
    }
    // An all-zero column would leave that cell unbounded in every fiber.
    for (std::size_t j = 0; j < k_; ++j) {
      bool nonzero = false;
      for (std::size_t r = 0; r < d_; ++r) {
        if (at(r, j) != 0) { nonzero = true; break; }
      }
      if (!nonzero) {
        throw InvalidInput("DesignMatrix: column " + std::to_string(j + 1) +
                           " is all zero");
      }
    }
  }

  std::size_t rows() const { return d_; }
  std::size_t cols() const { return k_; }

  Int at(std::size_t r, std::size_t c) const { return a_[r * k_ + c]; }

  std::span<const Int> row(std::size_t r) const {
    return std::span<const Int>(a_.data() + r * k_, k_);
  }

  std::vector<Int> column(std::size_t c) const {
    std::vector<Int> col(d_);
    for (std::size_t r = 0; r < d_; ++r) col[r] = at(r, c);
    return col;
  }

  friend bool operator==(const DesignMatrix& x, const DesignMatrix& y) {
    return x.d_ == y.d_ && x.k_ == y.k_ && x.a_ == y.a_;
  }

 private:
  std::size_t d_, k_;
  std::vector<Int> a_;  // row-major
};

enum class ModelKind { independence, univariate_logit, bivariate_logit };

/// Named model with covariate levels.  Cell linearization:
///  - independence(I,J): cells row-major, cell (i,j) -> (i-1)*J + (j-1);
///  - univariate-logit(I): success cells for i = 1..I, then failure cells
///    in the same order;
///  - bivariate-logit(I,J): success cells in lexicographic (i,j) order,
///    then failure cells in the same order.
/// Covariate levels are the integers 1..I and 1..J, unscaled.
struct ModelSpec {
  ModelKind kind;
  int levels_i = 0;
  int levels_j = 0;  // unused for univariate models

  static ModelSpec independence(int i, int j) {
    if (i < 1) throw InvalidInput("independence: I must be >= 1");
    if (j < 1) throw InvalidInput("independence: J must be >= 1");
    return {ModelKind::independence, i, j};
  }
  static ModelSpec univariate_logit(int i) {
    if (i < 2) throw InvalidInput("univariate-logit: I must be >= 2");
    return {ModelKind::univariate_logit, i, 0};
  }
  static ModelSpec bivariate_logit(int i, int j) {
    if (i < 2) throw InvalidInput("bivariate-logit: I must be >= 2");
    if (j < 2) throw InvalidInput("bivariate-logit: J must be >= 2");
    return {ModelKind::bivariate_logit, i, j};
  }

  std::size_t cell_count() const {
    switch (kind) {
      case ModelKind::independence:
        return std::size_t(levels_i) * std::size_t(levels_j);
      case ModelKind::univariate_logit:
        return 2 * std::size_t(levels_i);
      case ModelKind::bivariate_logit:
        return 2 * std::size_t(levels_i) * std::size_t(levels_j);
    }
    throw InvalidInput("ModelSpec: unknown kind");
  }

  std::size_t statistic_count() const {
    switch (kind) {
      case ModelKind::independence:
        return std::size_t(levels_i) + std::size_t(levels_j);
      case ModelKind::univariate_logit:
        return std::size_t(levels_i) + 2;
      case ModelKind::bivariate_logit:
        return std::size_t(levels_i) * std::size_t(levels_j) + 3;
    }
    throw InvalidInput("ModelSpec: unknown kind");
  }

  std::string name() const {
    switch (kind) {
      case ModelKind::independence: return "independence";
      case ModelKind::univariate_logit: return "univariate";
      case ModelKind::bivariate_logit: return "bivariate";
    }
    return "?";
  }

  std::string levels_label() const {
    if (kind == ModelKind::univariate_logit) return std::to_string(levels_i);
    return std::to_string(levels_i) + "," + std::to_string(levels_j);
  }
};

/// Build the design matrix whose rows are the model's sufficient statistics.
///
/// Row order:
///  - independence(I,J): I row sums, then J column sums;
///  - univariate-logit(I): total successes; level-weighted success sum
///    (coefficient i on success cell i); per-level trial totals;
///  - bivariate-logit(I,J): total successes; i-weighted success sum;
///    j-weighted success sum; per-(i,j) trial totals in lexicographic order.
inline DesignMatrix build_design_matrix(const ModelSpec& spec) {
  const std::size_t k = spec.cell_count();
  const std::size_t d = spec.statistic_count();
  std::vector<Int> a(d * k, 0);
  auto set = [&](std::size_t r, std::size_t c, Int v) { a[r * k + c] = v; };

  switch (spec.kind) {
    case ModelKind::independence: {
      const int I = spec.levels_i, J = spec.levels_j;
      for (int i = 0; i < I; ++i) {
        for (int j = 0; j < J; ++j) {
          const std::size_t cell = std::size_t(i) * J + j;
          set(std::size_t(i), cell, 1);           // row sum
          set(std::size_t(I) + j, cell, 1);       // column sum
        }
      }
      break;
    }
    case ModelKind::univariate_logit: {
      const int I = spec.levels_i;
      for (int i = 0; i < I; ++i) {
        const std::size_t success = std::size_t(i);
        const std::size_t failure = std::size_t(I) + i;
        set(0, success, 1);                       // total successes
        set(1, success, Int(i) + 1);              // level-weighted successes
        set(2 + std::size_t(i), success, 1);      // per-level trial total
        set(2 + std::size_t(i), failure, 1);
      }
      break;
    }
    case ModelKind::bivariate_logit: {
      const int I = spec.levels_i, J = spec.levels_j;
      for (int i = 0; i < I; ++i) {
        for (int j = 0; j < J; ++j) {
          const std::size_t pair = std::size_t(i) * J + j;
          const std::size_t success = pair;
          const std::size_t failure = std::size_t(I) * J + pair;
          set(0, success, 1);                     // total successes
          set(1, success, Int(i) + 1);            // i-weighted successes
          set(2, success, Int(j) + 1);            // j-weighted successes
          set(3 + pair, success, 1);              // per-(i,j) trial total
          set(3 + pair, failure, 1);
        }
      }
      break;
    }
  }
  return DesignMatrix(d, k, std::move(a));
}

/// A n, computed in exact checked integer arithmetic.
inline std::vector<Int> margin_of(const DesignMatrix& matrix, const TableVector& table) {
  if (table.size() != matrix.cols()) {
    throw InvalidInput("margin_of: table length does not match matrix columns");
  }
  std::vector<Int> b(matrix.rows(), 0);
  for (std::size_t r = 0; r < matrix.rows(); ++r) {
    Int acc = 0;
    const auto row = matrix.row(r);
    for (std::size_t c = 0; c < matrix.cols(); ++c) {
      acc = checked_add(acc, checked_mul(row[c], table[c]));
    }
    b[r] = acc;
  }
  return b;
}

/// A design matrix with a margin vector b; defines the fiber
/// { n >= 0 integer : A n = b }.
struct FiberSpec {
  DesignMatrix matrix;
  std::vector<Int> margin;

  FiberSpec(DesignMatrix m, std::vector<Int> b)
      : matrix(std::move(m)), margin(std::move(b)) {
    if (margin.size() != matrix.rows()) {
      throw InvalidInput("FiberSpec: margin length does not match matrix rows");
    }
  }

  /// Fiber of an observed table: b = A n_obs, so the fiber is nonempty.
  static FiberSpec from_observed(DesignMatrix m, const TableVector& observed) {
    auto b = margin_of(m, observed);
    return FiberSpec(std::move(m), std::move(b));
  }

  std::size_t cells() const { return matrix.cols(); }
  std::size_t statistics() const { return matrix.rows(); }
};

inline bool in_fiber(const FiberSpec& fiber, const TableVector& table) {
  if (table.size() != fiber.cells()) {
    throw InvalidInput("in_fiber: table length does not match fiber cells");
  }
  for (Int v : table) {
    if (v < 0) return false;
  }
  return margin_of(fiber.matrix, table) == fiber.margin;
}

}  // namespace sistab
