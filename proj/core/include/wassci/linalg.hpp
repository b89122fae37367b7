#pragma once

#include <Eigen/Dense>

#include "wassci/errors.hpp"

namespace wassci {

/// Dense LU factorization with partial pivoting. Wraps Eigen and adds the
/// checks the solvers rely on: singularity detection at construction and a
/// reciprocal-condition estimate.
class DenseLu {
 public:
  /// Throws SingularMatrix when a pivot collapses.
  explicit DenseLu(Eigen::MatrixXd a);

  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;

  /// Solves A^T x = b with the same factorization.
  Eigen::VectorXd solve_transposed(const Eigen::VectorXd& b) const;

  double rcond() const { return lu_.rcond(); }
  Eigen::Index dim() const { return a_.rows(); }
  const Eigen::MatrixXd& matrix() const { return a_; }

 private:
  Eigen::MatrixXd a_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
};

/// One-shot linear solve with partial pivoting. Verifies the residual bound
/// ||Ax - b||_inf <= 1e-9 (1 + ||b||_inf), applying one step of iterative
/// refinement before giving up with NumericalFailure.
Eigen::VectorXd solve_dense(const Eigen::MatrixXd& a, const Eigen::VectorXd& b);

}  // namespace wassci
