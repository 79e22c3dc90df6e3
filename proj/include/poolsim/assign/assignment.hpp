#pragma once

#include <cstddef>
#include <limits>
#include <vector>

namespace poolsim::assign {

inline constexpr double kForbidden = std::numeric_limits<double>::infinity();

/// Dense rows x cols cost matrix; kForbidden marks pairs that cannot match.
class CostMatrix {
 public:
  CostMatrix() = default;
  CostMatrix(std::size_t rows, std::size_t cols, double fill = kForbidden)
      : rows_(rows), cols_(cols), v_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t r, std::size_t c) { return v_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return v_[r * cols_ + c]; }
  bool allowed(std::size_t r, std::size_t c) const { return v_[r * cols_ + c] != kForbidden; }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<double> v_;
};

inline constexpr int kUnmatched = -1;

struct Matching {
  std::vector<int> row_to_col;  // kUnmatched for free rows
  std::size_t size = 0;
  double total_cost = 0.0;
};

/// Maximum-cardinality matching over allowed pairs by augmenting paths
/// (Kuhn). Rows are scanned in index order and columns in index order, so
/// the result is deterministic; costs are ignored.
Matching max_cardinality_matching(const CostMatrix& m);

/// Minimum total cost among maximum-cardinality matchings (rectangular
/// Hungarian method with potentials, O(n^2 m)). Costs must be finite or
/// kForbidden.
Matching min_cost_matching(const CostMatrix& m);

}  // namespace poolsim::assign
