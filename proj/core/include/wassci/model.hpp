#pragma once

#include <Eigen/Dense>
#include <vector>

#include "wassci/errors.hpp"

namespace wassci {

/// Two noisy samples and their noise covariances. X holds n points of
/// dimension d as rows, Y holds m points. Vectorization everywhere is
/// row-major: (x_{1,1},...,x_{1,d}, x_{2,1},...), then the same for Y.
/// Immutable after construction; all operations on it are pure.
struct ProblemInstance {
  Eigen::MatrixXd x_rows;   // n x d
  Eigen::MatrixXd y_rows;   // m x d
  Eigen::MatrixXd sigma_x;  // (n d) x (n d)
  Eigen::MatrixXd sigma_y;  // (m d) x (m d)

  int n() const { return static_cast<int>(x_rows.rows()); }
  int m() const { return static_cast<int>(y_rows.rows()); }
  int d() const { return static_cast<int>(x_rows.cols()); }

  /// (vec X, vec Y) stacked, length (n+m) d.
  Eigen::VectorXd data_vec() const;

  /// diag(sigma_x, sigma_y).
  Eigen::MatrixXd sigma_tilde() const;
};

/// Identity-covariance instance: Sigma_X = Sigma_Y = noise_variance * I.
ProblemInstance make_instance(Eigen::MatrixXd x_rows, Eigen::MatrixXd y_rows,
                              double noise_variance);

/// Full-covariance instance. Covariances are symmetrized; a Cholesky with
/// 1e-10 diagonal jitter must succeed or the instance is rejected.
ProblemInstance make_instance(Eigen::MatrixXd x_rows, Eigen::MatrixXd y_rows,
                              Eigen::MatrixXd sigma_x, Eigen::MatrixXd sigma_y);

/// Checks dimensions and covariance admissibility (symmetry to 1e-8, PSD via
/// jittered Cholesky), projecting covariances onto their symmetric part.
/// Throws InvalidInstance.
void validate_instance(ProblemInstance& inst);

/// Vectorized cost, its linear decomposition and the sign pattern.
/// cost_vec = theta * data_vec reproduces the pairwise l1 distances;
/// theta = sum_k signs[k] o (omega (x) e_k^T). Row (i-1)m + j pairs x_i
/// with y_j (row-major over the cost matrix).
struct CostDecomposition {
  int n = 0, m = 0, d = 0;
  Eigen::VectorXd cost_vec;             // nm
  Eigen::MatrixXd theta;                // nm x (n+m) d
  std::vector<Eigen::VectorXd> signs;   // d vectors of +-1, length nm
  Eigen::MatrixXd omega;                // nm x (n+m)

  int pairs() const { return n * m; }
};

/// The fixed structural matrix: row (i,j) has +1 at column i and -1 at n+j.
Eigen::MatrixXd omega_matrix(int n, int m);

/// Equality constraints of the transport polytope with the redundant last
/// column-sum row dropped: (n+m-1) x nm rows of {0,1}.
Eigen::MatrixXd constraint_matrix(int n, int m);

CostDecomposition build_cost_decomposition(const ProblemInstance& inst);

/// min c^T t  s.t.  s_mat t = h_vec, t >= 0.
struct TransportProblem {
  int n = 0, m = 0;
  Eigen::MatrixXd s_mat;    // (n+m-1) x nm
  Eigen::VectorXd h_vec;    // 1/n repeated n times, then 1/m repeated m-1
  Eigen::VectorXd cost_vec; // nm
};

TransportProblem build_transport_problem(const ProblemInstance& inst,
                                         const CostDecomposition& costs);

/// Optimal basic feasible solution of the transport LP. Basis indices are
/// 0-based internally and sorted ascending; reporting surfaces convert to
/// 1-based.
struct LpSolution {
  std::vector<int> basis;     // n+m-1 column indices, ascending
  Eigen::VectorXd t_basic;    // values aligned with basis
  double objective = 0.0;
  Eigen::VectorXd t_full;     // nm, zeros off basis
  bool degenerate = false;    // some basic variable <= degeneracy threshold
  int min_basic_index = -1;   // 0-based column of the smallest basic value
  double min_basic_value = 0.0;
};

/// Closed form t_M^T Theta_{M,:} (vec X, vec Y); equals the LP objective.
/// Throws SingularBasis when the basis columns are dependent.
double distance_from_basis(const LpSolution& sol, const CostDecomposition& costs,
                           const ProblemInstance& inst);

}  // namespace wassci
