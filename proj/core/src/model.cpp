#include "wassci/model.hpp"

#include <Eigen/Cholesky>
#include <cmath>

#include "wassci/linalg.hpp"

namespace wassci {

Eigen::VectorXd ProblemInstance::data_vec() const {
  const int nd = n() * d(), md = m() * d(), dd = d();
  Eigen::VectorXd v(nd + md);
  for (int i = 0; i < n(); ++i)
    for (int k = 0; k < dd; ++k) v(i * dd + k) = x_rows(i, k);
  for (int j = 0; j < m(); ++j)
    for (int k = 0; k < dd; ++k) v(nd + j * dd + k) = y_rows(j, k);
  return v;
}

Eigen::MatrixXd ProblemInstance::sigma_tilde() const {
  const int nd = n() * d(), md = m() * d();
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(nd + md, nd + md);
  s.topLeftCorner(nd, nd) = sigma_x;
  s.bottomRightCorner(md, md) = sigma_y;
  return s;
}

namespace {

void check_covariance(Eigen::MatrixXd& sigma, int expect, const char* name) {
  if (sigma.rows() != expect || sigma.cols() != expect)
    throw InvalidInstance(std::string(name) + " has wrong shape");
  const double scale = std::max(1.0, sigma.cwiseAbs().maxCoeff());
  if ((sigma - sigma.transpose()).cwiseAbs().maxCoeff() > 1e-8 * scale)
    throw InvalidInstance(std::string(name) + " is not symmetric (tol 1e-8)");
  sigma = 0.5 * (sigma + sigma.transpose()).eval();
  Eigen::MatrixXd jittered = sigma;
  jittered.diagonal().array() += 1e-10;
  Eigen::LLT<Eigen::MatrixXd> llt(jittered);
  if (llt.info() != Eigen::Success)
    throw InvalidInstance(std::string(name) +
                          " is not positive semidefinite (jittered Cholesky failed)");
}

}  // namespace

void validate_instance(ProblemInstance& inst) {
  if (inst.x_rows.rows() < 1 || inst.y_rows.rows() < 1 || inst.x_rows.cols() < 1)
    throw InvalidInstance("need n >= 1, m >= 1, d >= 1");
  if (inst.x_rows.cols() != inst.y_rows.cols())
    throw InvalidInstance("X and Y must have the same dimension d");
  if (!inst.x_rows.allFinite() || !inst.y_rows.allFinite())
    throw InvalidInstance("samples contain non-finite values");
  check_covariance(inst.sigma_x, inst.n() * inst.d(), "sigma_x");
  check_covariance(inst.sigma_y, inst.m() * inst.d(), "sigma_y");
}

ProblemInstance make_instance(Eigen::MatrixXd x_rows, Eigen::MatrixXd y_rows,
                              double noise_variance) {
  if (noise_variance <= 0.0)
    throw InvalidInstance("noise variance must be positive");
  const int nd = static_cast<int>(x_rows.rows() * x_rows.cols());
  const int md = static_cast<int>(y_rows.rows() * y_rows.cols());
  ProblemInstance inst{std::move(x_rows), std::move(y_rows),
                       noise_variance * Eigen::MatrixXd::Identity(nd, nd),
                       noise_variance * Eigen::MatrixXd::Identity(md, md)};
  validate_instance(inst);
  return inst;
}

ProblemInstance make_instance(Eigen::MatrixXd x_rows, Eigen::MatrixXd y_rows,
                              Eigen::MatrixXd sigma_x, Eigen::MatrixXd sigma_y) {
  ProblemInstance inst{std::move(x_rows), std::move(y_rows), std::move(sigma_x),
                       std::move(sigma_y)};
  validate_instance(inst);
  return inst;
}

Eigen::MatrixXd omega_matrix(int n, int m) {
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(n * m, n + m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) {
      omega(i * m + j, i) = 1.0;
      omega(i * m + j, n + j) = -1.0;
    }
  return omega;
}

Eigen::MatrixXd constraint_matrix(int n, int m) {
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(n + m - 1, n * m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) s(i, i * m + j) = 1.0;       // row sums
  for (int j = 0; j + 1 < m; ++j)
    for (int i = 0; i < n; ++i) s(n + j, i * m + j) = 1.0;   // column sums, last dropped
  return s;
}

CostDecomposition build_cost_decomposition(const ProblemInstance& inst) {
  const int n = inst.n(), m = inst.m(), d = inst.d();
  const int nm = n * m;

  CostDecomposition out;
  out.n = n;
  out.m = m;
  out.d = d;
  out.omega = omega_matrix(n, m);
  out.cost_vec.resize(nm);
  out.theta = Eigen::MatrixXd::Zero(nm, (n + m) * d);
  out.signs.assign(d, Eigen::VectorXd(nm));

  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      const int r = i * m + j;
      double cost = 0.0;
      for (int k = 0; k < d; ++k) {
        const double diff = inst.x_rows(i, k) - inst.y_rows(j, k);
        const double sgn = diff >= 0.0 ? 1.0 : -1.0;  // sign(0) := +1
        out.signs[k](r) = sgn;
        cost += std::abs(diff);
        out.theta(r, i * d + k) = sgn;
        out.theta(r, (n + j) * d + k) = -sgn;
      }
      out.cost_vec(r) = cost;
    }
  }
  return out;
}

TransportProblem build_transport_problem(const ProblemInstance& inst,
                                         const CostDecomposition& costs) {
  const int n = inst.n(), m = inst.m();
  TransportProblem tp;
  tp.n = n;
  tp.m = m;
  tp.s_mat = constraint_matrix(n, m);
  tp.h_vec.resize(n + m - 1);
  tp.h_vec.head(n).setConstant(1.0 / n);
  tp.h_vec.tail(m - 1).setConstant(1.0 / m);
  tp.cost_vec = costs.cost_vec;
  return tp;
}

double distance_from_basis(const LpSolution& sol, const CostDecomposition& costs,
                           const ProblemInstance& inst) {
  const int k = static_cast<int>(sol.basis.size());
  Eigen::MatrixXd s_mat = constraint_matrix(inst.n(), inst.m());
  Eigen::MatrixXd basis_cols(s_mat.rows(), k);
  for (int c = 0; c < k; ++c) basis_cols.col(c) = s_mat.col(sol.basis[c]);
  try {
    DenseLu check(basis_cols);
  } catch (const SingularMatrix&) {
    throw SingularBasis("distance_from_basis: basis columns are dependent");
  }

  const Eigen::VectorXd data = inst.data_vec();
  double value = 0.0;
  for (int c = 0; c < k; ++c)
    value += sol.t_basic(c) * costs.theta.row(sol.basis[c]).dot(data);
  return value;
}

}  // namespace wassci
