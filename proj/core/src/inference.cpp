#include "wassci/inference.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "wassci/normal.hpp"

namespace wassci {

namespace {

constexpr double kZeroDirectionTol = 1e-12;
constexpr double kMembershipSlack = 1e-9;
const double kInf = std::numeric_limits<double>::infinity();

// Accumulates {z : lower <= z <= upper} from constraints c0 + c1 z >= 0.
struct BoundAccumulator {
  double lo = -kInf;
  double hi = kInf;
  bool infeasible_fixed_row = false;
  double worst_fixed_row = 0.0;

  void add(double c0, double c1, double fixed_row_tol) {
    if (std::abs(c1) <= kZeroDirectionTol) {
      if (c0 < -fixed_row_tol) {
        infeasible_fixed_row = true;
        worst_fixed_row = std::min(worst_fixed_row, c0);
      }
      return;
    }
    const double bound = -c0 / c1;
    if (c1 > 0.0)
      lo = std::max(lo, bound);
    else
      hi = std::min(hi, bound);
  }
};

ExtendedInterval finish_region(const BoundAccumulator& acc, double z_obs,
                               const char* what) {
  if (acc.infeasible_fixed_row) {
    std::ostringstream msg;
    msg << what << ": observed data violates a z-independent selection row by "
        << -acc.worst_fixed_row;
    throw EmptyRegion(msg.str());
  }
  if (acc.lo > acc.hi || z_obs < acc.lo - kMembershipSlack ||
      z_obs > acc.hi + kMembershipSlack) {
    std::ostringstream msg;
    msg << what << ": region [" << acc.lo << ", " << acc.hi
        << "] excludes z_obs = " << z_obs;
    throw EmptyRegion(msg.str());
  }
  return ExtendedInterval::bounded(std::min(acc.lo, acc.hi),
                                   std::max(acc.lo, acc.hi));
}

}  // namespace

Eigen::VectorXd build_eta(const CostDecomposition& costs, const LpSolution& sol) {
  Eigen::VectorXd eta = Eigen::VectorXd::Zero(costs.theta.cols());
  for (std::size_t c = 0; c < sol.basis.size(); ++c)
    eta += sol.t_basic(static_cast<Eigen::Index>(c)) *
           costs.theta.row(sol.basis[c]).transpose();
  return eta;
}

SelectionLine nuisance_line(const Eigen::VectorXd& eta,
                            const Eigen::MatrixXd& sigma_tilde,
                            const Eigen::VectorXd& data_vec) {
  if (eta.size() != data_vec.size() || sigma_tilde.rows() != eta.size())
    throw DimensionMismatch("nuisance_line: eta, covariance and data disagree");
  const Eigen::VectorXd cov_eta = sigma_tilde * eta;
  const double sigma2 = eta.dot(cov_eta);
  if (sigma2 <= 1e-14)
    throw DegenerateDirection(
        "nuisance_line: eta^T Sigma~ eta <= 1e-14; eta is in the covariance null space");
  SelectionLine line;
  line.eta = eta;
  line.sigma2 = sigma2;
  line.b_vec = cov_eta / sigma2;
  line.z_obs = eta.dot(data_vec);
  line.a_vec = data_vec - line.b_vec * line.z_obs;
  return line;
}

ExtendedInterval compute_z1(const CostDecomposition& costs,
                            const SelectionLine& line) {
  const int n = costs.n, m = costs.m, d = costs.d;
  BoundAccumulator acc;
  for (int k = 0; k < d; ++k) {
    const Eigen::VectorXd& sgn = costs.signs[k];
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < m; ++j) {
        const int r = i * m + j;
        const int xi = i * d + k, yj = (n + j) * d + k;
        const double nu1 = sgn(r) * (line.a_vec(xi) - line.a_vec(yj));
        const double nu2 = sgn(r) * (line.b_vec(xi) - line.b_vec(yj));
        acc.add(nu1, nu2, 1e-9);
      }
    }
  }
  return finish_region(acc, line.z_obs, "compute_z1");
}

ExtendedInterval compute_z2(const TransportProblem& tp,
                            const CostDecomposition& costs,
                            const LpSolution& sol, const SelectionLine& line) {
  const Eigen::VectorXd u = costs.theta * line.a_vec;
  const Eigen::VectorXd v = costs.theta * line.b_vec;
  const RelativeCostPair rc = relative_costs(tp, sol, u, v);
  BoundAccumulator acc;
  for (Eigen::Index j = 0; j < rc.u_tilde.size(); ++j)
    acc.add(rc.u_tilde(j), rc.v_tilde(j), 1e-8);
  return finish_region(acc, line.z_obs, "compute_z2");
}

TruncationRegion truncation_region(const ExtendedInterval& z1,
                                   const ExtendedInterval& z2, double z_obs) {
  if (!z1.contains(z_obs, kMembershipSlack) ||
      !z2.contains(z_obs, kMembershipSlack))
    throw EmptyRegion("truncation_region: an input interval excludes z_obs");
  ExtendedInterval z = z1.intersect(z2);
  if (z.is_empty() || !z.contains(z_obs, kMembershipSlack))
    throw EmptyRegion("truncation_region: intersection excludes z_obs");
  // Within-tolerance violations snap onto z_obs so the pivot stays defined.
  if (!z.contains(z_obs))
    z = ExtendedInterval::bounded(std::min(z.lo(), z_obs),
                                  std::max(z.hi(), z_obs));
  TruncationRegion region;
  region.z1 = z1;
  region.z2 = z2;
  region.z = z;
  return region;
}

double truncated_normal_cdf(double x, double w, double sigma2,
                            const ExtendedInterval& region) {
  if (region.is_empty())
    throw EmptyRegion("truncated_normal_cdf: empty region");
  if (!(sigma2 > 0.0))
    throw DomainError("truncated_normal_cdf: sigma2 must be positive");
  if (x <= region.lo()) return 0.0;
  if (x >= region.hi()) return 1.0;

  const double sigma = std::sqrt(sigma2);
  const double a = (region.lo() - w) / sigma;
  const double b = (region.hi() - w) / sigma;
  const double xx = (x - w) / sigma;

  const double log_den = log_gauss_mass(a, b);
  if (std::isinf(log_den))
    throw NumericalUnderflow(
        "truncated_normal_cdf: truncation-region mass underflows in log space");
  const double log_num = log_gauss_mass(a, xx);
  if (std::isinf(log_num)) return 0.0;
  return std::min(std::exp(log_num - log_den), 1.0);
}

namespace {

// Pivot value as a function of the candidate mean w; strictly decreasing.
double pivot_at(double w, const SelectionLine& line, const ExtendedInterval& z) {
  return truncated_normal_cdf(line.z_obs, w, line.sigma2, z);
}

// Bisection for F(w) = target. When the target is not bracketed even after
// widening the bracket twice, the root lies outside z_obs +- 5000 sigma (or
// the pivot saturates because z_obs sits on a region endpoint, which exact
// data ties can produce). The bound is then widened to the conservative
// infinity: the interval only grows, so conditional coverage is preserved.
struct PivotRoot {
  double value = 0.0;
  bool bracketed = true;
};

PivotRoot invert_pivot(double target, const SelectionLine& line,
                       const ExtendedInterval& z) {
  const double sigma = std::sqrt(line.sigma2);
  double radius = 50.0 * sigma;
  for (int attempt = 0;; ++attempt) {
    const double lo = line.z_obs - radius, hi = line.z_obs + radius;
    // F is decreasing in w: F(lo) should sit above the target, F(hi) below.
    if (pivot_at(lo, line, z) >= target && pivot_at(hi, line, z) <= target) {
      double a = lo, b = hi;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (a + b);
        const double f = pivot_at(mid, line, z);
        if (std::abs(f - target) <= 1e-10 || (b - a) <= 1e-10 * sigma)
          return {mid, true};
        if (f > target)
          a = mid;
        else
          b = mid;
      }
      return {0.5 * (a + b), true};
    }
    if (attempt >= 2) return {0.0, false};
    radius *= 10.0;
  }
}

}  // namespace

ConfidenceInterval selective_ci(const SelectionLine& line,
                                const TruncationRegion& region, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw DomainError("selective_ci: alpha must lie in (0,1)");
  if (!region.z.contains(line.z_obs))
    throw EmptyRegion("selective_ci: z_obs outside the truncation region");
  ConfidenceInterval ci;
  ci.alpha = alpha;
  ci.kind = CiKind::selective;
  const PivotRoot lower = invert_pivot(1.0 - alpha / 2.0, line, region.z);
  const PivotRoot upper = invert_pivot(alpha / 2.0, line, region.z);
  ci.lo = lower.bracketed ? lower.value : -kInf;
  ci.hi = upper.bracketed ? upper.value : kInf;
  if (ci.lo > ci.hi) std::swap(ci.lo, ci.hi);
  return ci;
}

ConfidenceInterval naive_ci(double z_obs, double sigma2, double alpha) {
  if (!(sigma2 > 0.0)) throw DomainError("naive_ci: sigma2 must be positive");
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw DomainError("naive_ci: alpha must lie in (0,1]");
  ConfidenceInterval ci;
  ci.alpha = alpha;
  ci.kind = CiKind::naive;
  if (alpha == 1.0) {
    ci.lo = ci.hi = z_obs;
    return ci;
  }
  const double half = normal_quantile(1.0 - alpha / 2.0) * std::sqrt(sigma2);
  ci.lo = z_obs - half;
  ci.hi = z_obs + half;
  return ci;
}

InferenceResult run_algorithm_1(const ProblemInstance& inst,
                                const InferenceOptions& opts) {
  InferenceResult res;
  res.n = inst.n();
  res.m = inst.m();
  res.d = inst.d();
  res.alpha = opts.alpha;

  const CostDecomposition costs = build_cost_decomposition(inst);
  const TransportProblem tp = build_transport_problem(inst, costs);
  res.solution = solve_transport(tp, opts.simplex);
  res.degenerate = res.solution.degenerate;
  if (res.degenerate) {
    std::ostringstream msg;
    msg << "degenerate optimal basis: basic variable t_"
        << res.solution.min_basic_index + 1 << " = "
        << res.solution.min_basic_value
        << "; the truncation-region characterization assumes non-degeneracy";
    if (!opts.allow_degenerate)
      throw DegenerateSolution(msg.str(), res.solution.min_basic_index + 1,
                               res.solution.min_basic_value);
    res.warnings.push_back(msg.str());
  }

  res.distance = res.solution.objective;
  res.eta = build_eta(costs, res.solution);
  res.line = nuisance_line(res.eta, inst.sigma_tilde(), inst.data_vec());
  res.z_obs = res.line.z_obs;
  res.sigma2 = res.line.sigma2;
  if (std::abs(res.z_obs - res.distance) >
      1e-6 * (1.0 + std::abs(res.distance)))
    throw NumericalFailure(
        "run_algorithm_1: eta^T data does not reproduce the LP objective");

  const ExtendedInterval z1 = compute_z1(costs, res.line);
  const ExtendedInterval z2 = compute_z2(tp, costs, res.solution, res.line);
  res.region = truncation_region(z1, z2, res.z_obs);
  res.ci_selective = selective_ci(res.line, res.region, opts.alpha);
  if (std::isinf(res.ci_selective.lo) || std::isinf(res.ci_selective.hi))
    res.warnings.push_back(
        "selective pivot root beyond z_obs +- 5000 sigma; the affected bound "
        "was widened to infinity (conservative)");
  res.ci_naive = naive_ci(res.z_obs, res.sigma2, opts.alpha);
  return res;
}

namespace {

nlohmann::json bound_json(double v) {
  if (v == kInf) return "inf";
  if (v == -kInf) return "-inf";
  return v;
}

nlohmann::json interval_json(const ExtendedInterval& iv) {
  return nlohmann::json::array({bound_json(iv.lo()), bound_json(iv.hi())});
}

nlohmann::json ci_json(const ConfidenceInterval& ci) {
  return nlohmann::json::array({bound_json(ci.lo), bound_json(ci.hi)});
}

}  // namespace

std::string report_json(const InferenceResult& r) {
  nlohmann::json j;
  j["n"] = r.n;
  j["m"] = r.m;
  j["d"] = r.d;
  j["alpha"] = r.alpha;
  j["distance"] = r.distance;
  j["z_obs"] = r.z_obs;
  j["sigma2"] = r.sigma2;
  std::vector<int> basis_one_based;
  basis_one_based.reserve(r.solution.basis.size());
  for (int b : r.solution.basis) basis_one_based.push_back(b + 1);
  j["basis"] = basis_one_based;
  j["region"] = {{"z1", interval_json(r.region.z1)},
                 {"z2", interval_json(r.region.z2)},
                 {"z", interval_json(r.region.z)}};
  j["ci_selective"] = ci_json(r.ci_selective);
  j["ci_naive"] = ci_json(r.ci_naive);
  j["degenerate"] = r.degenerate;
  j["warnings"] = r.warnings;
  return j.dump(2) + "\n";
}

}  // namespace wassci
