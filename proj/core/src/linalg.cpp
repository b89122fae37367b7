#include "wassci/linalg.hpp"

#include <cmath>

namespace wassci {

DenseLu::DenseLu(Eigen::MatrixXd a) : a_(std::move(a)), lu_(a_) {
  if (a_.rows() != a_.cols())
    throw DomainError("DenseLu: matrix must be square");
  const Eigen::VectorXd diag = lu_.matrixLU().diagonal().cwiseAbs();
  const double max_piv = diag.maxCoeff();
  const double min_piv = diag.minCoeff();
  if (max_piv == 0.0 || min_piv <= 1e-13 * max_piv)
    throw SingularMatrix("DenseLu: matrix is singular to working precision");
}

Eigen::VectorXd DenseLu::solve(const Eigen::VectorXd& b) const {
  return lu_.solve(b);
}

Eigen::VectorXd DenseLu::solve_transposed(const Eigen::VectorXd& b) const {
  return lu_.transpose().solve(b);
}

Eigen::VectorXd solve_dense(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
  if (a.rows() != b.size())
    throw DimensionMismatch("solve_dense: rhs length does not match matrix");
  DenseLu lu(a);
  Eigen::VectorXd x = lu.solve(b);
  const double bound = 1e-9 * (1.0 + b.cwiseAbs().maxCoeff());
  Eigen::VectorXd residual = b - a * x;
  if (residual.cwiseAbs().maxCoeff() > bound) {
    x += lu.solve(residual);
    residual = b - a * x;
    if (residual.cwiseAbs().maxCoeff() > bound)
      throw NumericalFailure("solve_dense: residual bound not met");
  }
  return x;
}

}  // namespace wassci
