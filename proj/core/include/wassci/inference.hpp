#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "wassci/interval.hpp"
#include "wassci/model.hpp"
#include "wassci/simplex.hpp"

namespace wassci {

/// The one-dimensional restriction of the data implied by conditioning on
/// the nuisance component: data = a_vec + b_vec * z with z = eta^T data.
struct SelectionLine {
  Eigen::VectorXd eta;    // direction of interest, length (n+m) d
  Eigen::VectorXd a_vec;  // nuisance offset
  Eigen::VectorXd b_vec;  // line direction, eta^T b = 1
  double z_obs = 0.0;     // observed statistic
  double sigma2 = 0.0;    // eta^T Sigma~ eta
};

struct TruncationRegion {
  ExtendedInterval z1;  // sign pattern preserved
  ExtendedInterval z2;  // basis stays optimal
  ExtendedInterval z;   // intersection
};

enum class CiKind { naive, selective };

struct ConfidenceInterval {
  double lo = 0.0;
  double hi = 0.0;
  double alpha = 0.05;
  CiKind kind = CiKind::naive;

  double length() const { return hi - lo; }
  bool contains(double w) const { return w >= lo && w <= hi; }
};

/// eta = Theta_{M,:}^T t_M; eta^T data equals the LP objective.
Eigen::VectorXd build_eta(const CostDecomposition& costs, const LpSolution& sol);

/// a = (I - b eta^T) data, b = Sigma~ eta / (eta^T Sigma~ eta).
/// Throws DegenerateDirection when sigma2 <= 1e-14.
SelectionLine nuisance_line(const Eigen::VectorXd& eta,
                            const Eigen::MatrixXd& sigma_tilde,
                            const Eigen::VectorXd& data_vec);

/// {z : every dimension's sign pattern at a + b z equals the observed one}.
/// Rows whose direction coefficient is below 1e-12 in magnitude act as plain
/// feasibility checks. Throws EmptyRegion if z_obs is excluded beyond 1e-9.
ExtendedInterval compute_z1(const CostDecomposition& costs,
                            const SelectionLine& line);

/// {z : u~ + v~ z >= 0} with u = Theta a, v = Theta b; the interval on which
/// the observed basis remains optimal for the parametric cost.
ExtendedInterval compute_z2(const TransportProblem& tp,
                            const CostDecomposition& costs,
                            const LpSolution& sol, const SelectionLine& line);

/// Intersection; verifies z_obs membership (slack 1e-9) and snaps the
/// offending endpoint onto z_obs when the violation is within tolerance.
TruncationRegion truncation_region(const ExtendedInterval& z1,
                                   const ExtendedInterval& z2, double z_obs);

/// CDF at x of a normal(w, sigma2) truncated to `region`, evaluated through
/// log-space tail masses so heavy conditioning far from w stays finite.
/// x outside the region clamps to 0 or 1.
double truncated_normal_cdf(double x, double w, double sigma2,
                            const ExtendedInterval& region);

/// Inverts the truncated-normal pivot at alpha/2 and 1-alpha/2 by bisection
/// over w (the pivot is strictly decreasing in w). Brackets start at
/// z_obs +- 50 sigma and widen by 10x at most twice; a root that is still
/// not bracketed (heavy conditioning, or z_obs pinned on a region endpoint
/// by exact ties) widens that bound to the conservative infinity.
ConfidenceInterval selective_ci(const SelectionLine& line,
                                const TruncationRegion& region, double alpha);

/// z_obs +- Phi^-1(1 - alpha/2) sigma.
ConfidenceInterval naive_ci(double z_obs, double sigma2, double alpha);

struct InferenceOptions {
  double alpha = 0.05;
  bool allow_degenerate = false;
  SimplexOptions simplex;
};

struct InferenceResult {
  int n = 0, m = 0, d = 0;
  double alpha = 0.05;
  double distance = 0.0;
  double z_obs = 0.0;
  double sigma2 = 0.0;
  LpSolution solution;
  Eigen::VectorXd eta;
  SelectionLine line;
  TruncationRegion region;
  ConfidenceInterval ci_selective;
  ConfidenceInterval ci_naive;
  bool degenerate = false;
  std::vector<std::string> warnings;
};

/// The full pipeline: cost decomposition, transport LP, eta, nuisance line,
/// Z1, Z2, truncation region, selective and naive intervals.
InferenceResult run_algorithm_1(const ProblemInstance& inst,
                                const InferenceOptions& opts = {});

/// One-run report record as a JSON document (schema in the README). Basis
/// indices are 1-based; infinite bounds serialize as "-inf"/"inf" strings.
std::string report_json(const InferenceResult& result);

}  // namespace wassci
