#include "jigsolve/assign.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "jigsolve/errors.hpp"

namespace jigsolve {

namespace {

struct Matching {
  std::vector<int> row_to_col;
  std::vector<double> u;  // row potentials
  std::vector<double> v;  // column potentials
};

// Shortest augmenting path Hungarian algorithm, O(n^3). Potentials satisfy
// cost(i,j) - u[i] - v[j] >= 0 with equality on matched edges.
Matching hungarian(const Matrix& a) {
  const int n = static_cast<int>(a.rows());
  const double inf = std::numeric_limits<double>::infinity();
  // 1-based internally; column 0 is a virtual source.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> owner(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    owner[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = owner[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = a(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[owner[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (owner[j0] != 0);
    do {
      const int j1 = way[j0];
      owner[j0] = owner[j1];
      j0 = j1;
    } while (j0);
  }
  Matching m;
  m.row_to_col.assign(n, -1);
  m.u.assign(n, 0.0);
  m.v.assign(n, 0.0);
  for (int j = 1; j <= n; ++j) m.row_to_col[owner[j] - 1] = j - 1;
  for (int i = 0; i < n; ++i) {
    m.u[i] = u[i + 1];
    m.v[i] = v[i + 1];
  }
  return m;
}

// Every optimal matching uses only tight edges (zero reduced cost) and every
// perfect matching on tight edges is optimal, so the preferred optimum is
// found by fixing rows in order, taking the first column (in preference
// order) for which the remaining tight graph still has a perfect matching.
class TightGraphOrdering {
 public:
  TightGraphOrdering(const Matrix& a, const Matching& m, double tol, detail::TieBreak tie_break)
      : n_(static_cast<int>(a.rows())), tight_(static_cast<std::size_t>(n_) * n_, 0),
        row_to_col_(m.row_to_col), col_to_row_(n_, -1), fixed_col_(n_, 0), tie_break_(tie_break) {
    for (int i = 0; i < n_; ++i) {
      for (int j = 0; j < n_; ++j) tight_[i * n_ + j] = a(i, j) - m.u[i] - m.v[j] <= tol;
      // matched edges are tight by construction; guard against rounding
      tight_[i * n_ + row_to_col_[i]] = 1;
      col_to_row_[row_to_col_[i]] = i;
    }
  }

  std::vector<int> run() {
    for (int i = 0; i < n_; ++i) {
      for (int step = 0; step < n_; ++step) {
        const int j = tie_break_ == detail::TieBreak::kLexSmallest ? step : n_ - 1 - step;
        if (fixed_col_[j] || !tight_[i * n_ + j]) continue;
        if (try_force(i, j)) break;
      }
      fixed_col_[row_to_col_[i]] = 1;
    }
    return row_to_col_;
  }

 private:
  // Re-routes the matching so that row i takes column j, changing only rows > i.
  bool try_force(int i, int j) {
    if (row_to_col_[i] == j) return true;
    const auto saved_rows = row_to_col_;
    const auto saved_cols = col_to_row_;
    const int displaced = col_to_row_[j];
    const int freed = row_to_col_[i];
    row_to_col_[i] = j;
    col_to_row_[j] = i;
    row_to_col_[displaced] = -1;
    col_to_row_[freed] = -1;
    fixed_col_[j] = 1;  // j now belongs to row i for the path search
    std::vector<char> seen(n_, 0);
    const bool ok = augment(displaced, seen);
    fixed_col_[j] = 0;
    if (!ok) {
      row_to_col_ = saved_rows;
      col_to_row_ = saved_cols;
    }
    return ok;
  }

  bool augment(int row, std::vector<char>& seen) {
    for (int c = 0; c < n_; ++c) {
      if (fixed_col_[c] || seen[c] || !tight_[row * n_ + c]) continue;
      seen[c] = 1;
      const int other = col_to_row_[c];
      if (other < 0 || augment(other, seen)) {
        row_to_col_[row] = c;
        col_to_row_[c] = row;
        return true;
      }
    }
    return false;
  }

  int n_;
  std::vector<char> tight_;
  std::vector<int> row_to_col_;
  std::vector<int> col_to_row_;
  std::vector<char> fixed_col_;
  detail::TieBreak tie_break_;
};

double matching_cost(const Matrix& a, const std::vector<int>& row_to_col) {
  double sum = 0.0;
  for (std::size_t i = 0; i < row_to_col.size(); ++i) sum += a(i, row_to_col[i]);
  return sum;
}

}  // namespace

namespace detail {

AssignmentResult min_cost_assignment(const Matrix& costs, TieBreak tie_break) {
  if (costs.rows() != costs.cols() || costs.rows() == 0) {
    throw DomainError("assignment needs a non-empty square cost matrix");
  }
  double scale = 1.0;
  for (double x : costs.data()) {
    if (!std::isfinite(x)) throw DomainError("assignment: non-finite cost");
    scale = std::max(scale, std::abs(x));
  }
  const Matching m = hungarian(costs);
  const double hungarian_cost = matching_cost(costs, m.row_to_col);

  const double edge_tol = 1e-9 * scale;
  std::vector<int> chosen = TightGraphOrdering(costs, m, edge_tol, tie_break).run();
  double chosen_cost = matching_cost(costs, chosen);
  // Near-tight edges may combine into a slightly worse matching; keep the
  // tie-broken result only when it is optimal to rounding precision.
  const double total_tol = 8.0 * std::numeric_limits<double>::epsilon() * scale * costs.rows();
  if (chosen_cost > hungarian_cost + total_tol) {
    chosen = m.row_to_col;
    chosen_cost = hungarian_cost;
  }
  return {Configuration(std::move(chosen)), chosen_cost};
}

}  // namespace detail

AssignmentResult min_cost_assignment(const Matrix& costs) {
  return detail::min_cost_assignment(costs, detail::TieBreak::kLexSmallest);
}

AssignmentResult unary_argmin(const UnaryMatrix& u) {
  const int n = u.size();
  Matrix costs(n, n);
  for (int s = 0; s < n; ++s) {
    for (int a = 0; a < n; ++a) costs(s, a) = neg_log(u.at(s, a));
  }
  return min_cost_assignment(costs);
}

}  // namespace jigsolve
