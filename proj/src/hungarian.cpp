#include "geofd/hungarian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "geofd/error.hpp"

namespace geofd {

CostMatrix::CostMatrix(std::initializer_list<std::initializer_list<double>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw ContractError("ragged cost matrix literal");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

double CostMatrix::max_entry() const {
  return data_.empty() ? 0.0 : *std::max_element(data_.begin(), data_.end());
}

Matching solve_matching(const CostMatrix& cost) {
  for (std::size_t r = 0; r < cost.rows(); ++r) {
    for (std::size_t c = 0; c < cost.cols(); ++c) {
      if (!std::isfinite(cost(r, c))) {
        throw ContractError("cost matrix entry (" + std::to_string(r) + ", " + std::to_string(c) +
                            ") is not finite");
      }
    }
  }
  const std::size_t n = std::max(cost.rows(), cost.cols());
  Matching m;
  m.row_to_col.assign(cost.rows(), Matching::kUnmatched);
  m.col_to_row.assign(cost.cols(), Matching::kUnmatched);
  if (n == 0) return m;

  const double sentinel = 10.0 * std::max(cost.max_entry(), 1.0);
  auto at = [&](std::size_t r, std::size_t c) {
    return (r < cost.rows() && c < cost.cols()) ? cost(r, c) : sentinel;
  };

  // 1-based arrays; index 0 is the virtual root of each augmenting search.
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> row_pot(n + 1, 0.0), col_pot(n + 1, 0.0);
  std::vector<std::size_t> col_owner(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    col_owner[0] = i;
    std::size_t j0 = 0;
    std::vector<double> slack(n + 1, kInf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = col_owner[j0];
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double reduced = at(i0 - 1, j - 1) - row_pot[i0] - col_pot[j];
        if (reduced < slack[j]) {
          slack[j] = reduced;
          way[j] = j0;
        }
        if (slack[j] < delta) {
          delta = slack[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          row_pot[col_owner[j]] += delta;
          col_pot[j] -= delta;
        } else {
          slack[j] -= delta;
        }
      }
      j0 = j1;
    } while (col_owner[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      col_owner[j0] = col_owner[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  for (std::size_t j = 1; j <= n; ++j) {
    const std::size_t r = col_owner[j] - 1;
    const std::size_t c = j - 1;
    if (r < cost.rows() && c < cost.cols()) {
      m.row_to_col[r] = static_cast<int>(c);
      m.col_to_row[c] = static_cast<int>(r);
    }
  }
  for (std::size_t r = 0; r < cost.rows(); ++r) {
    if (m.row_to_col[r] != Matching::kUnmatched) {
      m.total_cost += cost(r, static_cast<std::size_t>(m.row_to_col[r]));
    }
  }
  return m;
}

}  // namespace geofd
