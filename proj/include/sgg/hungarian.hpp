// Copyright 2026 The sgg-toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SGG_HUNGARIAN_HPP
#define SGG_HUNGARIAN_HPP

#include <Eigen/Core>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <type_traits>
#include <utility>
#include <vector>

namespace sgg {

/// A one-to-one assignment of size min(rows, cols). Pairs are sorted by row
/// index; the total is the sum of the selected entries in that order.
struct Assignment {
  std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;
  double total_cost = 0.0;
};

namespace detail {

// Shortest-augmenting-path assignment with potentials for n rows <= m cols.
// Returns the minimal total cost as the row-order sum of the chosen entries.
inline double solve_rows_le_cols(const Eigen::MatrixXd& a) {
  const Eigen::Index n = a.rows();
  const Eigen::Index m = a.cols();
  constexpr double kInf = std::numeric_limits<double>::infinity();

  std::vector<double> u(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<double> v(static_cast<std::size_t>(m) + 1, 0.0);
  std::vector<Eigen::Index> match(static_cast<std::size_t>(m) + 1, 0);
  std::vector<Eigen::Index> way(static_cast<std::size_t>(m) + 1, 0);

  for (Eigen::Index i = 1; i <= n; ++i) {
    match[0] = i;
    Eigen::Index j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(m) + 1, kInf);
    std::vector<char> used(static_cast<std::size_t>(m) + 1, 0);
    do {
      used[static_cast<std::size_t>(j0)] = 1;
      const Eigen::Index i0 = match[static_cast<std::size_t>(j0)];
      Eigen::Index j1 = 0;
      double delta = kInf;
      for (Eigen::Index j = 1; j <= m; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        const double cur = a(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] -
                           v[static_cast<std::size_t>(j)];
        if (cur < minv[static_cast<std::size_t>(j)]) {
          minv[static_cast<std::size_t>(j)] = cur;
          way[static_cast<std::size_t>(j)] = j0;
        }
        if (minv[static_cast<std::size_t>(j)] < delta) {
          delta = minv[static_cast<std::size_t>(j)];
          j1 = j;
        }
      }
      for (Eigen::Index j = 0; j <= m; ++j) {
        if (used[static_cast<std::size_t>(j)]) {
          u[static_cast<std::size_t>(match[static_cast<std::size_t>(j)])] +=
              delta;
          v[static_cast<std::size_t>(j)] -= delta;
        } else {
          minv[static_cast<std::size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (match[static_cast<std::size_t>(j0)] != 0);
    do {
      const Eigen::Index j1 = way[static_cast<std::size_t>(j0)];
      match[static_cast<std::size_t>(j0)] = match[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<Eigen::Index> col_of_row(static_cast<std::size_t>(n), -1);
  for (Eigen::Index j = 1; j <= m; ++j) {
    const Eigen::Index i = match[static_cast<std::size_t>(j)];
    if (i != 0) col_of_row[static_cast<std::size_t>(i - 1)] = j - 1;
  }
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    total += a(i, col_of_row[static_cast<std::size_t>(i)]);
  }
  return total;
}

inline Eigen::MatrixXd take(const Eigen::MatrixXd& a,
                            const std::vector<Eigen::Index>& rows,
                            const std::vector<Eigen::Index>& cols) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(cols.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < cols.size(); ++c) {
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          a(rows[r], cols[c]);
    }
  }
  return out;
}

inline double solve_value(const Eigen::MatrixXd& a) {
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  if (a.rows() <= a.cols()) return solve_rows_le_cols(a);
  const Eigen::MatrixXd t = a.transpose();
  return solve_rows_le_cols(t);
}

inline double solve_value_sub(const Eigen::MatrixXd& a,
                              const std::vector<Eigen::Index>& rows,
                              const std::vector<Eigen::Index>& cols) {
  if (rows.empty() || cols.empty()) return 0.0;
  return solve_value(take(a, rows, cols));
}

}  // namespace detail

/// Minimum-cost one-to-one assignment of size min(rows, cols). Among
/// assignments of equal total cost, returns the lexicographically smallest
/// one: pairs sorted by row index, compared as the flattened
/// (row, col, row, col, ...) sequence. Rectangular matrices are allowed;
/// entries must be finite. An empty matrix yields an empty assignment.
template <typename Derived>
Assignment hungarian(const Eigen::MatrixBase<Derived>& cost) {
  using Scalar = typename Derived::Scalar;
  const Eigen::MatrixXd a = cost.template cast<double>();
  if (!a.allFinite()) {
    throw std::invalid_argument("hungarian: cost entries must be finite");
  }

  Assignment result;
  const Eigen::Index n = a.rows();
  const Eigen::Index m = a.cols();
  const Eigen::Index k = std::min(n, m);
  if (k == 0) return result;

  double target = detail::solve_value(a);
  const auto tol = [&](double value) {
    if (std::is_integral_v<Scalar>) return 0.0;
    return 1e-9 * std::max(1.0, std::abs(value));
  };

  std::vector<Eigen::Index> avail_rows(static_cast<std::size_t>(n));
  std::vector<Eigen::Index> avail_cols(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < n; ++i) avail_rows[static_cast<std::size_t>(i)] = i;
  for (Eigen::Index j = 0; j < m; ++j) avail_cols[static_cast<std::size_t>(j)] = j;

  // Fix pairs one at a time in flattened-lexicographic order: the smallest
  // usable row, then the smallest column for it that still admits an optimal
  // completion. Each feasibility check re-solves the remaining subproblem.
  for (Eigen::Index remaining = k; remaining > 0; --remaining) {
    bool fixed = false;
    for (std::size_t ri = 0; ri < avail_rows.size() && !fixed; ++ri) {
      // Rows after this one must still be able to host the rest.
      if (avail_rows.size() - ri - 1 <
          static_cast<std::size_t>(remaining - 1)) {
        break;
      }
      const Eigen::Index i = avail_rows[ri];
      std::vector<Eigen::Index> rows_after(avail_rows.begin() +
                                               static_cast<std::ptrdiff_t>(ri) + 1,
                                           avail_rows.end());
      for (std::size_t cj = 0; cj < avail_cols.size(); ++cj) {
        const Eigen::Index j = avail_cols[cj];
        std::vector<Eigen::Index> cols_left = avail_cols;
        cols_left.erase(cols_left.begin() + static_cast<std::ptrdiff_t>(cj));
        const double sub = detail::solve_value_sub(a, rows_after, cols_left);
        const double cand = a(i, j) + sub;
        if (cand <= target + tol(target)) {
          result.pairs.emplace_back(i, j);
          target = sub;
          avail_rows = std::move(rows_after);
          avail_cols = std::move(cols_left);
          fixed = true;
          break;
        }
      }
    }
    if (!fixed) {
      throw std::logic_error("hungarian: failed to extend a partial optimum");
    }
  }

  result.total_cost = 0.0;
  for (const auto& [i, j] : result.pairs) result.total_cost += a(i, j);
  return result;
}

}  // namespace sgg

#endif  // SGG_HUNGARIAN_HPP
