#include "poolsim/assign/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace poolsim::assign {

namespace {

bool augment(const CostMatrix& m, std::size_t r, std::vector<char>& seen, std::vector<int>& col_to_row) {
  for (std::size_t c = 0; c < m.cols(); ++c) {
    if (!m.allowed(r, c) || seen[c]) continue;
    seen[c] = 1;
    if (col_to_row[c] == kUnmatched || augment(m, static_cast<std::size_t>(col_to_row[c]), seen, col_to_row)) {
      col_to_row[c] = static_cast<int>(r);
      return true;
    }
  }
  return false;
}

void finish(const CostMatrix& m, Matching& out) {
  out.size = 0;
  out.total_cost = 0.0;
  for (std::size_t r = 0; r < out.row_to_col.size(); ++r) {
    const int c = out.row_to_col[r];
    if (c == kUnmatched) continue;
    ++out.size;
    out.total_cost += m(r, static_cast<std::size_t>(c));
  }
}

// Square-or-wide Hungarian: rows <= cols, every row gets a column.
std::vector<int> hungarian(const std::vector<std::vector<double>>& a) {
  const std::size_t n = a.size();
  const std::size_t m = n ? a[0].size() : 0;
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<std::size_t> p(m + 1, 0), way(m + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(m + 1, inf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = a[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> row_to_col(n, kUnmatched);
  for (std::size_t j = 1; j <= m; ++j)
    if (p[j] != 0) row_to_col[p[j] - 1] = static_cast<int>(j - 1);
  return row_to_col;
}

}  // namespace

Matching max_cardinality_matching(const CostMatrix& m) {
  std::vector<int> col_to_row(m.cols(), kUnmatched);
  std::vector<char> seen(m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    std::fill(seen.begin(), seen.end(), 0);
    augment(m, r, seen, col_to_row);
  }
  Matching out;
  out.row_to_col.assign(m.rows(), kUnmatched);
  for (std::size_t c = 0; c < m.cols(); ++c)
    if (col_to_row[c] != kUnmatched) out.row_to_col[static_cast<std::size_t>(col_to_row[c])] = static_cast<int>(c);
  finish(m, out);
  return out;
}

Matching min_cost_matching(const CostMatrix& m) {
  Matching out;
  out.row_to_col.assign(m.rows(), kUnmatched);
  if (m.rows() == 0 || m.cols() == 0) return out;
  // A forbidden pair costs more than every allowed pair together, so any
  // optimum first maximizes the number of allowed pairs.
  double big = 1.0;
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) {
      const double x = m(r, c);
      if (x == kForbidden) continue;
      if (!std::isfinite(x)) throw std::invalid_argument("cost matrix entries must be finite or forbidden");
      big += 2.0 * std::abs(x);
    }
  const bool transpose = m.rows() > m.cols();
  const std::size_t n = transpose ? m.cols() : m.rows();
  const std::size_t k = transpose ? m.rows() : m.cols();
  std::vector<std::vector<double>> a(n, std::vector<double>(k));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      const double x = transpose ? m(j, i) : m(i, j);
      a[i][j] = x == kForbidden ? big : x;
    }
  const std::vector<int> sol = hungarian(a);
  for (std::size_t i = 0; i < n; ++i) {
    const auto j = static_cast<std::size_t>(sol[i]);
    const std::size_t r = transpose ? j : i;
    const std::size_t c = transpose ? i : j;
    if (m.allowed(r, c)) out.row_to_col[r] = static_cast<int>(c);
  }
  finish(m, out);
  return out;
}

}  // namespace poolsim::assign
