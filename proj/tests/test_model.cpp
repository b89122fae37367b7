#include <Eigen/Dense>
#include <cmath>

#include "doctest.h"
#include "support/oracles.hpp"
#include "wassci/model.hpp"
#include "wassci/rng.hpp"
#include "wassci/simplex.hpp"

using namespace wassci;

namespace {

ProblemInstance w2_instance() {
  Eigen::MatrixXd x(2, 1), y(3, 1);
  x << 1, 4;
  y << 0, 2, 5;
  return make_instance(x, y, 1.0);
}

}  // namespace

TEST_CASE("instance validation") {
  Eigen::MatrixXd x(2, 1), y(2, 2);
  x << 0, 1;
  y << 0, 1, 2, 3;
  CHECK_THROWS_AS(make_instance(x, y, 1.0), InvalidInstance);

  Eigen::MatrixXd y1(2, 1);
  y1 << 0, 1;
  CHECK_THROWS_AS(make_instance(x, y1, -1.0), InvalidInstance);

  Eigen::MatrixXd bad_cov = Eigen::MatrixXd::Identity(2, 2);
  bad_cov(0, 1) = 0.5;  // asymmetric beyond tolerance
  CHECK_THROWS_AS(
      make_instance(x, y1, bad_cov, Eigen::MatrixXd::Identity(2, 2)),
      InvalidInstance);

  Eigen::MatrixXd not_psd = Eigen::MatrixXd::Identity(2, 2);
  not_psd(0, 0) = -1.0;
  CHECK_THROWS_AS(
      make_instance(x, y1, not_psd, Eigen::MatrixXd::Identity(2, 2)),
      InvalidInstance);

  // tiny asymmetry within tolerance is projected away
  Eigen::MatrixXd nearly = Eigen::MatrixXd::Identity(2, 2);
  nearly(0, 1) = 1e-10;
  const ProblemInstance inst =
      make_instance(x, y1, nearly, Eigen::MatrixXd::Identity(2, 2));
  CHECK(inst.sigma_x(0, 1) == doctest::Approx(inst.sigma_x(1, 0)));
}

TEST_CASE("data_vec is row-major and sigma_tilde is block diagonal") {
  Eigen::MatrixXd x(2, 2), y(1, 2);
  x << 1, 2, 3, 4;
  y << 5, 6;
  const ProblemInstance inst = make_instance(x, y, 2.0);
  const Eigen::VectorXd v = inst.data_vec();
  CHECK(v.size() == 6);
  CHECK(v(0) == 1);
  CHECK(v(1) == 2);
  CHECK(v(2) == 3);
  CHECK(v(3) == 4);
  CHECK(v(4) == 5);
  CHECK(v(5) == 6);
  const Eigen::MatrixXd st = inst.sigma_tilde();
  CHECK(st.rows() == 6);
  CHECK(st(0, 0) == 2.0);
  CHECK(st(5, 5) == 2.0);
  CHECK(st(0, 5) == 0.0);
}

TEST_CASE("cost decomposition on the hand-checked 2x3 instance") {
  const CostDecomposition costs = build_cost_decomposition(w2_instance());
  Eigen::VectorXd expected(6);
  expected << 1, 1, 4, 4, 2, 1;
  CHECK((costs.cost_vec - expected).cwiseAbs().maxCoeff() < 1e-15);
  Eigen::VectorXd signs(6);
  signs << 1, -1, -1, 1, 1, -1;
  CHECK((costs.signs[0] - signs).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("constant identical samples give zero cost and +1 signs") {
  Eigen::MatrixXd x = Eigen::MatrixXd::Constant(3, 1, 2.5);
  Eigen::MatrixXd y = Eigen::MatrixXd::Constant(2, 1, 2.5);
  const CostDecomposition costs =
      build_cost_decomposition(make_instance(x, y, 1.0));
  CHECK(costs.cost_vec.cwiseAbs().maxCoeff() == 0.0);
  CHECK(costs.signs[0].minCoeff() == 1.0);  // sign(0) := +1
}

TEST_CASE("d=2 single-pair decomposition") {
  Eigen::MatrixXd x(1, 2), y(1, 2);
  x << 1, 1;
  y << 0, 3;
  const CostDecomposition costs =
      build_cost_decomposition(make_instance(x, y, 1.0));
  CHECK(costs.cost_vec(0) == doctest::Approx(3.0));
  CHECK(costs.signs[0](0) == 1.0);
  CHECK(costs.signs[1](0) == -1.0);
}

TEST_CASE("reconstruction: theta * data reproduces the costs") {
  StreamRng rng(11, 0);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(5));
    const int m = 1 + static_cast<int>(rng.below(5));
    const int d = 1 + static_cast<int>(rng.below(3));
    const ProblemInstance inst =
        oracles::random_instance(rng, n, m, d, rng.uniform() * 2.0);
    const CostDecomposition costs = build_cost_decomposition(inst);
    const Eigen::VectorXd recon = costs.theta * inst.data_vec();
    CHECK((recon - costs.cost_vec).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("omega rows pick out x_i - y_j") {
  StreamRng rng(12, 0);
  const ProblemInstance inst = oracles::random_instance(rng, 4, 3, 1, 1.0);
  const Eigen::MatrixXd omega = omega_matrix(4, 3);
  const Eigen::VectorXd data = inst.data_vec();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(omega.row(i * 3 + j).dot(data) ==
            doctest::Approx(inst.x_rows(i, 0) - inst.y_rows(j, 0)).epsilon(1e-14));
}

TEST_CASE("d=1 theta equals the direct sign-weighted omega construction") {
  StreamRng rng(13, 0);
  const ProblemInstance inst = oracles::random_instance(rng, 5, 4, 1, 0.5);
  const CostDecomposition costs = build_cost_decomposition(inst);
  const Eigen::MatrixXd direct =
      costs.signs[0].asDiagonal() * omega_matrix(5, 4);
  CHECK((costs.theta - direct).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("transport problem shapes and right-hand side") {
  const ProblemInstance inst = w2_instance();
  const TransportProblem tp =
      build_transport_problem(inst, build_cost_decomposition(inst));
  CHECK(tp.s_mat.rows() == 4);
  CHECK(tp.s_mat.cols() == 6);
  Eigen::VectorXd h(4);
  h << 0.5, 0.5, 1.0 / 3, 1.0 / 3;
  CHECK((tp.h_vec - h).cwiseAbs().maxCoeff() < 1e-15);

  // every column of the full (pre-drop) matrix has exactly two ones
  for (int col = 0; col < 6; ++col) {
    const double col_sum = tp.s_mat.col(col).sum();
    const int j = col % 3;
    CHECK(col_sum == (j == 2 ? 1.0 : 2.0));
  }
  // full row rank
  Eigen::FullPivLU<Eigen::MatrixXd> lu(tp.s_mat);
  CHECK(lu.rank() == 4);
}

TEST_CASE("1x1 and 2x2 transport problems") {
  Eigen::MatrixXd x(1, 1), y(1, 1);
  x << 0;
  y << 1;
  const ProblemInstance tiny = make_instance(x, y, 1.0);
  const TransportProblem tp1 =
      build_transport_problem(tiny, build_cost_decomposition(tiny));
  CHECK(tp1.s_mat.rows() == 1);
  CHECK(tp1.s_mat.cols() == 1);
  CHECK(tp1.s_mat(0, 0) == 1.0);
  CHECK(tp1.h_vec(0) == 1.0);

  Eigen::MatrixXd x2(2, 1), y2(2, 1);
  x2 << 0, 1;
  y2 << 2, 3;
  const ProblemInstance sq = make_instance(x2, y2, 1.0);
  const TransportProblem tp2 =
      build_transport_problem(sq, build_cost_decomposition(sq));
  Eigen::MatrixXd expect(3, 4);
  expect << 1, 1, 0, 0,
            0, 0, 1, 1,
            1, 0, 1, 0;
  CHECK((tp2.s_mat - expect).cwiseAbs().maxCoeff() == 0.0);
  Eigen::VectorXd h2(3);
  h2 << 0.5, 0.5, 0.5;
  CHECK((tp2.h_vec - h2).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("solutions satisfy the dropped constraint") {
  StreamRng rng(14, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(5));
    const int m = 1 + static_cast<int>(rng.below(5));
    const ProblemInstance inst = oracles::random_instance(rng, n, m, 1, 1.0);
    const CostDecomposition costs = build_cost_decomposition(inst);
    const TransportProblem tp = build_transport_problem(inst, costs);
    const LpSolution sol = solve_transport(tp);

    // row sums 1/n, all column sums (incl. the dropped one) 1/m
    for (int i = 0; i < n; ++i) {
      double row = 0.0;
      for (int j = 0; j < m; ++j) row += sol.t_full(i * m + j);
      CHECK(row == doctest::Approx(1.0 / n).epsilon(1e-9));
    }
    for (int j = 0; j < m; ++j) {
      double col = 0.0;
      for (int i = 0; i < n; ++i) col += sol.t_full(i * m + j);
      CHECK(col == doctest::Approx(1.0 / m).epsilon(1e-9));
    }
  }
}

TEST_CASE("distance_from_basis on the hand-checked basis") {
  const ProblemInstance inst = w2_instance();
  const CostDecomposition costs = build_cost_decomposition(inst);
  LpSolution sol;
  sol.basis = {0, 1, 4, 5};
  sol.t_basic.resize(4);
  sol.t_basic << 1.0 / 3, 1.0 / 6, 1.0 / 6, 1.0 / 3;
  CHECK(distance_from_basis(sol, costs, inst) ==
        doctest::Approx(7.0 / 6).epsilon(1e-12));

  // dependent columns: cells (0,0),(0,2),(1,0),(1,2) do not span
  LpSolution bad = sol;
  bad.basis = {0, 2, 3, 5};
  CHECK_THROWS_AS(distance_from_basis(bad, costs, inst), SingularBasis);
}

TEST_CASE("distance_from_basis equals sorted-sample formula for n=m") {
  StreamRng rng(15, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(7));
    const ProblemInstance inst = oracles::random_instance(rng, n, n, 1, 1.5);
    const CostDecomposition costs = build_cost_decomposition(inst);
    const TransportProblem tp = build_transport_problem(inst, costs);
    const LpSolution sol = solve_transport(tp);
    std::vector<double> xs(inst.x_rows.data(), inst.x_rows.data() + n);
    std::vector<double> ys(inst.y_rows.data(), inst.y_rows.data() + n);
    std::sort(xs.begin(), xs.end());
    std::sort(ys.begin(), ys.end());
    double direct = 0.0;
    for (int i = 0; i < n; ++i) direct += std::abs(xs[i] - ys[i]) / n;
    CHECK(distance_from_basis(sol, costs, inst) ==
          doctest::Approx(direct).epsilon(1e-9));
    CHECK(distance_from_basis(sol, costs, inst) ==
          doctest::Approx(sol.objective).epsilon(1e-9));
  }
}

TEST_CASE("zero distance for identical constant samples") {
  Eigen::MatrixXd x = Eigen::MatrixXd::Constant(2, 1, 3.0);
  const ProblemInstance inst = make_instance(x, x, 1.0);
  const CostDecomposition costs = build_cost_decomposition(inst);
  const TransportProblem tp = build_transport_problem(inst, costs);
  const LpSolution sol = solve_transport(tp);
  CHECK(sol.objective == doctest::Approx(0.0));
  CHECK(distance_from_basis(sol, costs, inst) == doctest::Approx(0.0));
}
