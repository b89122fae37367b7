#pragma once

#include <Eigen/Dense>
#include <vector>

#include "wassci/model.hpp"

namespace wassci {

struct SimplexOptions {
  double feasibility_tol = 1e-9;
  double reduced_cost_tol = 1e-9;
  double degeneracy_tol = 1e-11;
  double max_condition = 1e12;
  int max_iterations = 500000;
};

/// Primal simplex on the transportation polytope: northwest-corner start,
/// Bland's rule for entering and leaving variables (anti-cycling), explicit
/// dense LU of the basis each iteration. Deterministic: identical inputs
/// produce the identical basis.
LpSolution solve_transport(const TransportProblem& tp,
                           const SimplexOptions& opts = {});

/// Reduced costs of the nonbasic columns for the split cost u + v z.
/// u_tilde/v_tilde are aligned with `nonbasis` (ascending column order).
struct RelativeCostPair {
  std::vector<int> nonbasis;
  Eigen::VectorXd u_tilde;
  Eigen::VectorXd v_tilde;
};

/// u_tilde = u_{Mc} - S_{:,Mc}^T S_{:,M}^-T u_M and likewise v_tilde.
/// At the solved cost (u = cost_vec, v = 0) u_tilde are the classical
/// reduced costs of the optimal basis.
RelativeCostPair relative_costs(const TransportProblem& tp,
                                const LpSolution& sol,
                                const Eigen::VectorXd& u,
                                const Eigen::VectorXd& v);

/// Primal feasibility of t_full plus nonnegative reduced costs of the basis.
bool verify_optimality(const TransportProblem& tp, const LpSolution& sol,
                       const SimplexOptions& opts = {});

}  // namespace wassci
