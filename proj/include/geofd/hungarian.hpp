#pragma once

#include <cstddef>
#include <vector>

namespace geofd {

// Dense row-major matrix of assignment costs.
class CostMatrix {
 public:
  CostMatrix() = default;
  CostMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  CostMatrix(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  double max_entry() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct Matching {
  static constexpr int kUnmatched = -1;
  // row_to_col[r] is the column matched to row r, or kUnmatched when r was
  // matched to padding.
  std::vector<int> row_to_col;
  std::vector<int> col_to_row;
  // Sum of the real entries used by the matching.
  double total_cost = 0.0;
};

/// Minimum-cost matching by the Hungarian method with row/column potentials,
/// O(n^3) for n = max(rows, cols). Non-square inputs are padded to square
/// with a sentinel of 10x the largest entry; rows or columns matched to
/// padding come back unmatched. Throws ContractError on non-finite entries.
Matching solve_matching(const CostMatrix& cost);

}  // namespace geofd
