#include "wassci/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numeric>
#include <thread>

#include "json.hpp"
#include "wassci/csv.hpp"
#include "wassci/normal.hpp"

namespace wassci {

std::string to_string(NoiseFamily family) {
  switch (family) {
    case NoiseFamily::gaussian: return "gaussian";
    case NoiseFamily::laplace: return "laplace";
    case NoiseFamily::skew_normal: return "skew_normal";
    case NoiseFamily::student_t: return "student_t";
  }
  return "unknown";
}

std::string to_string(VarianceMode mode) {
  return mode == VarianceMode::known ? "known" : "estimated";
}

NoiseFamily parse_noise_family(const std::string& name) {
  if (name == "gaussian") return NoiseFamily::gaussian;
  if (name == "laplace") return NoiseFamily::laplace;
  if (name == "skew_normal" || name == "skew") return NoiseFamily::skew_normal;
  if (name == "student_t" || name == "t20") return NoiseFamily::student_t;
  throw DomainError("unknown noise family '" + name + "'");
}

double sample_noise(NoiseFamily family, StreamRng& rng) {
  switch (family) {
    case NoiseFamily::gaussian:
      return rng.normal();
    case NoiseFamily::laplace: {
      // scale 1/sqrt(2) gives unit variance
      const double v = rng.uniform_open() - 0.5;
      const double mag = -std::log(1.0 - 2.0 * std::abs(v));
      return (v < 0.0 ? -mag : mag) / std::sqrt(2.0);
    }
    case NoiseFamily::skew_normal: {
      const double alpha = kSkewNormalShape;
      const double delta = alpha / std::sqrt(1.0 + alpha * alpha);
      const double u0 = rng.normal(), u1 = rng.normal();
      const double raw =
          delta * std::abs(u0) + std::sqrt(1.0 - delta * delta) * u1;
      const double mean = delta * std::sqrt(2.0 / 3.14159265358979323846);
      const double sd = std::sqrt(1.0 - 2.0 * delta * delta / 3.14159265358979323846);
      return (raw - mean) / sd;
    }
    case NoiseFamily::student_t: {
      const double z = rng.normal();
      double chi2 = 0.0;
      for (int i = 0; i < kStudentTDof; ++i) {
        const double g = rng.normal();
        chi2 += g * g;
      }
      const double t = z / std::sqrt(chi2 / kStudentTDof);
      return t * std::sqrt((kStudentTDof - 2.0) / kStudentTDof);
    }
  }
  throw DomainError("sample_noise: unknown family");
}

ProblemInstance generate_instance(const ExperimentConfig& cfg, int trial_index) {
  StreamRng rng(cfg.seed, static_cast<std::uint64_t>(trial_index));
  Eigen::MatrixXd x(cfg.n, cfg.d), y(cfg.m, cfg.d);
  for (int i = 0; i < cfg.n; ++i)
    for (int k = 0; k < cfg.d; ++k)
      x(i, k) = 1.0 + cfg.noise_scale * sample_noise(cfg.noise, rng);
  for (int j = 0; j < cfg.m; ++j)
    for (int k = 0; k < cfg.d; ++k)
      y(j, k) = 1.0 + cfg.delta + cfg.noise_scale * sample_noise(cfg.noise, rng);

  double sigma2 = cfg.noise_scale * cfg.noise_scale;
  if (cfg.variance_mode == VarianceMode::estimated)
    sigma2 = pooled_variance(x, y);
  return make_instance(std::move(x), std::move(y), sigma2);
}

double true_target(const ExperimentConfig& cfg, const Eigen::VectorXd& eta) {
  Eigen::VectorXd mu((cfg.n + cfg.m) * cfg.d);
  mu.head(cfg.n * cfg.d).setConstant(1.0);
  mu.tail(cfg.m * cfg.d).setConstant(1.0 + cfg.delta);
  return eta.dot(mu);
}

double pooled_variance(const Eigen::MatrixXd& x_rows,
                       const Eigen::MatrixXd& y_rows) {
  const Eigen::Index n = x_rows.rows(), m = y_rows.rows(), d = x_rows.cols();
  const double dof = static_cast<double>(((n - 1) + (m - 1)) * d);
  if (dof <= 0.0)
    throw DomainError("pooled_variance: need more than one point per sample");
  const Eigen::RowVectorXd x_mean = x_rows.colwise().mean();
  const Eigen::RowVectorXd y_mean = y_rows.colwise().mean();
  const double ss = (x_rows.rowwise() - x_mean).squaredNorm() +
                    (y_rows.rowwise() - y_mean).squaredNorm();
  return ss / dof;
}

namespace {

TrialRecord run_single_trial(const ExperimentConfig& cfg, int trial_index) {
  TrialRecord rec;
  rec.trial = trial_index;
  try {
    const ProblemInstance inst = generate_instance(cfg, trial_index);
    InferenceOptions opts;
    opts.alpha = cfg.alpha;
    opts.allow_degenerate = cfg.allow_degenerate;
    const auto start = std::chrono::steady_clock::now();
    const InferenceResult res = run_algorithm_1(inst, opts);
    const auto stop = std::chrono::steady_clock::now();
    rec.wall_ms =
        std::chrono::duration<double, std::milli>(stop - start).count();
    rec.ok = true;
    rec.degenerate = res.degenerate;
    rec.z_obs = res.z_obs;
    rec.distance = res.distance;
    rec.true_w = true_target(cfg, res.eta);
    rec.sel_lo = res.ci_selective.lo;
    rec.sel_hi = res.ci_selective.hi;
    rec.naive_lo = res.ci_naive.lo;
    rec.naive_hi = res.ci_naive.hi;
    rec.covered_sel = res.ci_selective.contains(rec.true_w);
    rec.covered_naive = res.ci_naive.contains(rec.true_w);
    rec.pivot = truncated_normal_cdf(res.z_obs, rec.true_w, res.sigma2,
                                     res.region.z);
  } catch (const Error& e) {
    rec.ok = false;
    rec.error = e.what();
    rec.z_obs = rec.distance = rec.true_w = std::numeric_limits<double>::quiet_NaN();
    rec.sel_lo = rec.sel_hi = rec.naive_lo = rec.naive_hi =
        std::numeric_limits<double>::quiet_NaN();
  }
  return rec;
}

void aggregate(ExperimentReport& report) {
  report.completed = report.excluded = report.degenerate_trials = 0;
  report.covered_selective = report.covered_naive = 0;
  report.infinite_selective = 0;
  double sel_len_sum = 0.0, naive_len_sum = 0.0;
  int sel_len_count = 0, naive_len_count = 0;
  for (const TrialRecord& rec : report.trials) {
    if (!rec.ok) {
      ++report.excluded;
      continue;
    }
    ++report.completed;
    if (rec.degenerate) ++report.degenerate_trials;
    if (rec.covered_sel) ++report.covered_selective;
    if (rec.covered_naive) ++report.covered_naive;
    const double sel_len = rec.sel_hi - rec.sel_lo;
    if (std::isfinite(sel_len)) {
      sel_len_sum += sel_len;
      ++sel_len_count;
    } else {
      ++report.infinite_selective;
    }
    const double naive_len = rec.naive_hi - rec.naive_lo;
    if (std::isfinite(naive_len)) {
      naive_len_sum += naive_len;
      ++naive_len_count;
    }
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  report.coverage_selective =
      report.completed ? static_cast<double>(report.covered_selective) /
                             report.completed
                       : nan;
  report.coverage_naive =
      report.completed ? static_cast<double>(report.covered_naive) /
                             report.completed
                       : nan;
  if (report.completed > 0) {
    const double p = report.coverage_selective;
    const double half =
        1.959963984540054 * std::sqrt(std::max(p * (1.0 - p), 0.0) /
                                      report.completed);
    report.band_selective_lo = p - half;
    report.band_selective_hi = p + half;
  } else {
    report.band_selective_lo = report.band_selective_hi = nan;
  }
  report.mean_length_selective =
      sel_len_count ? sel_len_sum / sel_len_count : nan;
  report.mean_length_naive =
      naive_len_count ? naive_len_sum / naive_len_count : nan;
}

}  // namespace

ExperimentReport run_coverage_experiment(const ExperimentConfig& cfg) {
  if (cfg.trials < 1) throw DomainError("trials must be >= 1");
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0))
    throw DomainError("alpha must lie in (0,1)");

  ExperimentReport report;
  report.config = cfg;
  report.trials.resize(cfg.trials);

  const int workers = std::clamp(cfg.parallelism, 1, 512);
  if (workers == 1) {
    for (int t = 0; t < cfg.trials; ++t)
      report.trials[t] = run_single_trial(cfg, t);
  } else {
    std::atomic<int> next{0};
    auto body = [&] {
      for (int t; (t = next.fetch_add(1)) < cfg.trials;)
        report.trials[t] = run_single_trial(cfg, t);
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(body);
    for (auto& th : pool) th.join();
  }
  aggregate(report);
  return report;
}

std::vector<ExperimentReport> run_length_experiment(
    ExperimentConfig base, const std::vector<double>& deltas) {
  std::vector<ExperimentReport> reports;
  reports.reserve(deltas.size());
  for (double delta : deltas) {
    base.delta = delta;
    reports.push_back(run_coverage_experiment(base));
  }
  return reports;
}

std::vector<TimingRow> run_timing_experiment(ExperimentConfig base,
                                             const std::vector<int>& sizes,
                                             double timeout_s) {
  std::vector<TimingRow> rows;
  for (int size : sizes) {
    ExperimentConfig cfg = base;
    cfg.n = cfg.m = size;
    TimingRow row;
    row.n = size;
    row.trials = cfg.trials;
    std::vector<double> times;
    for (int t = 0; t < cfg.trials; ++t) {
      TrialRecord rec = run_single_trial(cfg, t);
      if (!rec.ok || rec.wall_ms > timeout_s * 1000.0) {
        ++row.failures;
        continue;
      }
      times.push_back(rec.wall_ms);
    }
    if (!times.empty()) {
      std::sort(times.begin(), times.end());
      row.median_ms = times[times.size() / 2];
      row.max_ms = times.back();
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<std::pair<std::string, ExperimentReport>> run_robustness_experiment(
    ExperimentConfig base, const std::vector<std::string>& families) {
  std::vector<std::pair<std::string, ExperimentReport>> out;
  for (const std::string& family : families) {
    ExperimentConfig cfg = base;
    if (family == "estimated") {
      cfg.noise = NoiseFamily::gaussian;
      cfg.variance_mode = VarianceMode::estimated;
    } else {
      cfg.noise = parse_noise_family(family);
      cfg.variance_mode = VarianceMode::known;
    }
    out.emplace_back(family, run_coverage_experiment(cfg));
  }
  return out;
}

ProblemInstance load_two_sample_csv(const std::string& path_x,
                                    const std::string& path_y, SigmaMode mode,
                                    double sigma2, bool skip_header,
                                    const SubsampleOptions& sub) {
  Eigen::MatrixXd x = load_matrix_csv(path_x, skip_header);
  Eigen::MatrixXd y = load_matrix_csv(path_y, skip_header);
  if (x.cols() != y.cols())
    throw DimensionMismatch("X has " + std::to_string(x.cols()) +
                            " columns, Y has " + std::to_string(y.cols()));

  auto subsample = [&](const Eigen::MatrixXd& mat, int keep,
                       std::uint64_t stream) {
    if (keep < 0 || keep >= mat.rows()) return mat;
    if (keep < 1) throw DomainError("subsample size must be >= 1");
    std::vector<int> idx(mat.rows());
    std::iota(idx.begin(), idx.end(), 0);
    StreamRng rng(sub.seed, stream);
    for (int i = 0; i < keep; ++i) {
      const int j = i + static_cast<int>(rng.below(idx.size() - i));
      std::swap(idx[i], idx[j]);
    }
    idx.resize(keep);
    std::sort(idx.begin(), idx.end());
    Eigen::MatrixXd out(keep, mat.cols());
    for (int i = 0; i < keep; ++i) out.row(i) = mat.row(idx[i]);
    return out;
  };
  x = subsample(x, sub.n, 0);
  y = subsample(y, sub.m, 1);

  double variance = sigma2;
  if (mode == SigmaMode::estimated) variance = pooled_variance(x, y);
  return make_instance(std::move(x), std::move(y), variance);
}

ProblemInstance load_two_sample_csv_cov(const std::string& path_x,
                                        const std::string& path_y,
                                        const std::string& cov_x_path,
                                        const std::string& cov_y_path,
                                        bool skip_header) {
  Eigen::MatrixXd x = load_matrix_csv(path_x, skip_header);
  Eigen::MatrixXd y = load_matrix_csv(path_y, skip_header);
  if (x.cols() != y.cols())
    throw DimensionMismatch("X has " + std::to_string(x.cols()) +
                            " columns, Y has " + std::to_string(y.cols()));
  const int d = static_cast<int>(x.cols());
  Eigen::MatrixXd cov_x =
      load_covariance_csv(cov_x_path, static_cast<int>(x.rows()) * d, skip_header);
  Eigen::MatrixXd cov_y =
      load_covariance_csv(cov_y_path, static_cast<int>(y.rows()) * d, skip_header);
  return make_instance(std::move(x), std::move(y), std::move(cov_x),
                       std::move(cov_y));
}

namespace {

nlohmann::json number_or_null(double v) {
  if (std::isnan(v)) return nullptr;
  return v;
}

nlohmann::json aggregate_record(const ExperimentReport& r) {
  nlohmann::json j;
  const ExperimentConfig& c = r.config;
  j["n"] = c.n;
  j["m"] = c.m;
  j["d"] = c.d;
  j["delta"] = c.delta;
  j["noise"] = to_string(c.noise);
  j["variance_mode"] = to_string(c.variance_mode);
  j["trials"] = c.trials;
  j["alpha"] = c.alpha;
  j["seed"] = c.seed;
  j["completed"] = r.completed;
  j["excluded"] = r.excluded;
  j["degenerate_trials"] = r.degenerate_trials;
  j["covered_selective"] = r.covered_selective;
  j["covered_naive"] = r.covered_naive;
  j["coverage_selective"] = number_or_null(r.coverage_selective);
  j["coverage_naive"] = number_or_null(r.coverage_naive);
  if (std::isnan(r.band_selective_lo))
    j["band_selective"] = nullptr;
  else
    j["band_selective"] =
        nlohmann::json::array({r.band_selective_lo, r.band_selective_hi});
  j["mean_length_selective"] = number_or_null(r.mean_length_selective);
  j["mean_length_naive"] = number_or_null(r.mean_length_naive);
  j["infinite_selective"] = r.infinite_selective;
  std::map<std::string, int> errors;
  for (const TrialRecord& rec : r.trials)
    if (!rec.ok) ++errors[rec.error];
  j["errors"] = errors;
  return j;
}

}  // namespace

std::string aggregate_json(const ExperimentReport& report) {
  return aggregate_record(report).dump(2) + "\n";
}

std::string sweep_json(const std::string& kind,
                       const std::vector<ExperimentReport>& reports) {
  nlohmann::json j;
  j["schema"] = 1;
  j["kind"] = kind;
  nlohmann::json records = nlohmann::json::array();
  for (const ExperimentReport& r : reports) records.push_back(aggregate_record(r));
  j["records"] = records;
  return j.dump(2) + "\n";
}

std::string robustness_json(
    const std::vector<std::pair<std::string, ExperimentReport>>& runs) {
  nlohmann::json j;
  j["schema"] = 1;
  j["kind"] = "robustness";
  nlohmann::json records = nlohmann::json::array();
  for (const auto& [family, report] : runs) {
    nlohmann::json rec = aggregate_record(report);
    rec["family"] = family;
    records.push_back(rec);
  }
  j["records"] = records;
  return j.dump(2) + "\n";
}

std::string timing_json(const std::vector<TimingRow>& rows) {
  nlohmann::json j;
  j["schema"] = 1;
  j["kind"] = "benchmark";
  nlohmann::json out = nlohmann::json::array();
  for (const TimingRow& row : rows) {
    out.push_back({{"n", row.n},
                   {"trials", row.trials},
                   {"failures", row.failures},
                   {"median_ms", row.median_ms},
                   {"max_ms", row.max_ms}});
  }
  j["rows"] = out;
  return j.dump(2) + "\n";
}

void write_trials_csv(std::ostream& out, const ExperimentReport& report) {
  out << "trial,z_obs,distance,sel_lo,sel_hi,naive_lo,naive_hi,"
         "covered_sel,covered_naive,degenerate,wall_ms\n";
  char buf[64];
  auto num = [&buf](double v) -> std::string {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
  };
  for (const TrialRecord& rec : report.trials) {
    out << rec.trial << ',' << num(rec.z_obs) << ',' << num(rec.distance)
        << ',' << num(rec.sel_lo) << ',' << num(rec.sel_hi) << ','
        << num(rec.naive_lo) << ',' << num(rec.naive_hi) << ','
        << (rec.covered_sel ? 1 : 0) << ',' << (rec.covered_naive ? 1 : 0)
        << ',' << (rec.degenerate ? 1 : 0) << ',' << num(rec.wall_ms) << '\n';
  }
}

}  // namespace wassci
