#include "wassci/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "wassci/linalg.hpp"

namespace wassci {

namespace {

// Column (i,j) of the reduced constraint matrix touches row i and, unless j
// is the dropped last column-sum, row n+j.
struct ColumnRows {
  int row;
  int col_row;  // -1 when the column-sum row was dropped
};

inline ColumnRows column_rows(int col, int n, int m) {
  const int i = col / m, j = col % m;
  return {i, j + 1 < m ? n + j : -1};
}

// Northwest-corner start: exactly n+m-1 cells, with zero cells inserted on
// ties so the set always forms a spanning-tree basis.
std::vector<int> northwest_basis(int n, int m) {
  std::vector<double> supply(n, 1.0 / n), demand(m, 1.0 / m);
  std::vector<int> cells;
  cells.reserve(n + m - 1);
  int i = 0, j = 0;
  while (true) {
    cells.push_back(i * m + j);
    if (i == n - 1 && j == m - 1) break;
    bool go_right;
    if (i == n - 1)
      go_right = true;
    else if (j == m - 1)
      go_right = false;
    else
      go_right = supply[i] > demand[j];
    if (go_right) {
      supply[i] -= demand[j];
      demand[j] = 0.0;
      ++j;
    } else {
      demand[j] -= supply[i];
      supply[i] = 0.0;
      ++i;
    }
  }
  return cells;
}

Eigen::MatrixXd gather_columns(const Eigen::MatrixXd& s_mat,
                               const std::vector<int>& cols) {
  Eigen::MatrixXd b(s_mat.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) b.col(c) = s_mat.col(cols[c]);
  return b;
}

DenseLu factor_basis(const Eigen::MatrixXd& s_mat, const std::vector<int>& basis,
                     double max_condition) {
  try {
    DenseLu lu(gather_columns(s_mat, basis));
    if (1.0 / lu.rcond() > max_condition)
      throw NumericalFailure("transport basis condition estimate exceeds bound");
    return lu;
  } catch (const SingularMatrix&) {
    throw SingularBasis("transport basis is singular");
  }
}

}  // namespace

LpSolution solve_transport(const TransportProblem& tp, const SimplexOptions& opts) {
  const int n = tp.n, m = tp.m, nm = n * m;
  const int k = n + m - 1;
  if (!tp.cost_vec.allFinite())
    throw DomainError("solve_transport: costs must be finite");

  std::vector<int> basis = northwest_basis(n, m);
  std::vector<char> is_basic(nm, 0);
  for (int c : basis) is_basic[c] = 1;

  Eigen::VectorXd cost_b(k), duals(k), t_b(k), direction(k);

  for (int iter = 0;; ++iter) {
    if (iter > opts.max_iterations)
      throw NumericalFailure("solve_transport: iteration cap reached");

    DenseLu lu = factor_basis(tp.s_mat, basis, opts.max_condition);
    for (int c = 0; c < k; ++c) cost_b(c) = tp.cost_vec(basis[c]);
    duals = lu.solve_transposed(cost_b);

    // Bland: entering variable is the lowest-index column with negative
    // reduced cost. Column sparsity makes pricing O(1) per column.
    int entering = -1;
    for (int col = 0; col < nm; ++col) {
      if (is_basic[col]) continue;
      const ColumnRows cr = column_rows(col, n, m);
      double reduced = tp.cost_vec(col) - duals(cr.row);
      if (cr.col_row >= 0) reduced -= duals(cr.col_row);
      if (reduced < -opts.reduced_cost_tol) {
        entering = col;
        break;
      }
    }
    if (entering < 0) {
      t_b = lu.solve(tp.h_vec);
      break;
    }

    t_b = lu.solve(tp.h_vec);
    Eigen::VectorXd enter_col = tp.s_mat.col(entering);
    direction = lu.solve(enter_col);

    // Ratio test; ties broken on the smallest basic column index (Bland).
    double best_theta = 0.0;
    int leave_pos = -1;
    for (int pos = 0; pos < k; ++pos) {
      if (direction(pos) > 1e-12) {
        const double theta = std::max(t_b(pos), 0.0) / direction(pos);
        if (leave_pos < 0 || theta < best_theta - 1e-15 ||
            (theta <= best_theta + 1e-15 && basis[pos] < basis[leave_pos])) {
          best_theta = theta;
          leave_pos = pos;
        }
      }
    }
    if (leave_pos < 0)
      throw Infeasible("solve_transport: unbounded direction on a bounded polytope");

    is_basic[basis[leave_pos]] = 0;
    is_basic[entering] = 1;
    basis[leave_pos] = entering;
  }

  // Canonical ordering of the final basis.
  std::vector<int> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return basis[a] < basis[b]; });
  LpSolution sol;
  sol.basis.resize(k);
  sol.t_basic.resize(k);
  for (int c = 0; c < k; ++c) {
    sol.basis[c] = basis[order[c]];
    sol.t_basic(c) = t_b(order[c]);
  }
  sol.t_full = Eigen::VectorXd::Zero(nm);
  for (int c = 0; c < k; ++c) sol.t_full(sol.basis[c]) = sol.t_basic(c);
  sol.objective = tp.cost_vec.dot(sol.t_full);

  if (sol.t_basic.minCoeff() < -opts.feasibility_tol)
    throw NumericalFailure("solve_transport: basic solution left the polytope");

  int min_pos = 0;
  sol.t_basic.minCoeff(&min_pos);
  sol.min_basic_index = sol.basis[min_pos];
  sol.min_basic_value = sol.t_basic(min_pos);
  sol.degenerate = sol.min_basic_value <= opts.degeneracy_tol;
  return sol;
}

RelativeCostPair relative_costs(const TransportProblem& tp, const LpSolution& sol,
                                const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  const int n = tp.n, m = tp.m, nm = n * m;
  const int k = n + m - 1;
  if (u.size() != nm || v.size() != nm)
    throw DimensionMismatch("relative_costs: u and v must have length n*m");

  DenseLu lu = [&] {
    try {
      return DenseLu(gather_columns(tp.s_mat, sol.basis));
    } catch (const SingularMatrix&) {
      throw SingularBasis("relative_costs: basis columns are dependent");
    }
  }();

  Eigen::VectorXd u_b(k), v_b(k);
  for (int c = 0; c < k; ++c) {
    u_b(c) = u(sol.basis[c]);
    v_b(c) = v(sol.basis[c]);
  }
  const Eigen::VectorXd yu = lu.solve_transposed(u_b);
  const Eigen::VectorXd yv = lu.solve_transposed(v_b);

  std::vector<char> is_basic(nm, 0);
  for (int c : sol.basis) is_basic[c] = 1;

  RelativeCostPair out;
  out.nonbasis.reserve(nm - k);
  out.u_tilde.resize(nm - k);
  out.v_tilde.resize(nm - k);
  int pos = 0;
  for (int col = 0; col < nm; ++col) {
    if (is_basic[col]) continue;
    const ColumnRows cr = column_rows(col, n, m);
    double ru = u(col) - yu(cr.row);
    double rv = v(col) - yv(cr.row);
    if (cr.col_row >= 0) {
      ru -= yu(cr.col_row);
      rv -= yv(cr.col_row);
    }
    out.nonbasis.push_back(col);
    out.u_tilde(pos) = ru;
    out.v_tilde(pos) = rv;
    ++pos;
  }
  return out;
}

bool verify_optimality(const TransportProblem& tp, const LpSolution& sol,
                       const SimplexOptions& opts) {
  if (sol.t_full.size() != tp.cost_vec.size()) return false;
  if (sol.t_full.minCoeff() < -opts.feasibility_tol) return false;
  const Eigen::VectorXd residual = tp.s_mat * sol.t_full - tp.h_vec;
  if (residual.cwiseAbs().maxCoeff() > opts.feasibility_tol) return false;

  try {
    RelativeCostPair rc =
        relative_costs(tp, sol, tp.cost_vec, Eigen::VectorXd::Zero(tp.cost_vec.size()));
    return rc.u_tilde.size() == 0 ||
           rc.u_tilde.minCoeff() >= -opts.reduced_cost_tol;
  } catch (const SingularBasis&) {
    return false;
  }
}

}  // namespace wassci
