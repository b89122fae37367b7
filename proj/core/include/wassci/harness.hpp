#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "wassci/inference.hpp"
#include "wassci/model.hpp"
#include "wassci/rng.hpp"

namespace wassci {

enum class NoiseFamily { gaussian, laplace, skew_normal, student_t };
enum class VarianceMode { known, estimated };

std::string to_string(NoiseFamily family);
std::string to_string(VarianceMode mode);
NoiseFamily parse_noise_family(const std::string& name);

/// Fixed shape parameters of the non-Gaussian families.
inline constexpr double kSkewNormalShape = 10.0;
inline constexpr int kStudentTDof = 20;

/// One synthetic-experiment configuration: mu_X = 1, mu_Y = 1 + delta
/// element-wise, noise standardized to unit variance then scaled.
struct ExperimentConfig {
  int n = 5, m = 5, d = 1;
  double delta = 0.0;
  NoiseFamily noise = NoiseFamily::gaussian;
  VarianceMode variance_mode = VarianceMode::known;
  int trials = 1000;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  int parallelism = 1;
  double noise_scale = 1.0;  // sigma of the (standardized) noise
  // Degenerate optima are reported, not refused; the paper's n = m designs
  // are degenerate in every trial. Strict mode refuses them instead and the
  // affected trials are excluded from coverage denominators.
  bool allow_degenerate = true;
};

/// Unit-variance draw from the configured family.
double sample_noise(NoiseFamily family, StreamRng& rng);

/// Deterministic function of (cfg.seed, trial_index).
ProblemInstance generate_instance(const ExperimentConfig& cfg, int trial_index);

/// eta^T (mu_X, mu_Y) for the configured means.
double true_target(const ExperimentConfig& cfg, const Eigen::VectorXd& eta);

struct TrialRecord {
  int trial = 0;
  bool ok = false;
  std::string error;  // empty when ok
  bool degenerate = false;
  double z_obs = 0.0, distance = 0.0, true_w = 0.0;
  double sel_lo = 0.0, sel_hi = 0.0;
  double naive_lo = 0.0, naive_hi = 0.0;
  bool covered_sel = false, covered_naive = false;
  double pivot = 0.0;  // truncated-normal pivot at the true target
  double wall_ms = 0.0;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<TrialRecord> trials;
  // Aggregates; coverage denominators exclude errored trials.
  int completed = 0, excluded = 0, degenerate_trials = 0;
  int covered_selective = 0, covered_naive = 0, infinite_selective = 0;
  double coverage_selective = 0.0, coverage_naive = 0.0;
  double band_selective_lo = 0.0, band_selective_hi = 0.0;
  double mean_length_selective = 0.0, mean_length_naive = 0.0;
};

/// Runs cfg.trials independent trials (cfg.parallelism workers, per-trial
/// RNG streams); aggregation is order-independent, so results are identical
/// for any worker count.
ExperimentReport run_coverage_experiment(const ExperimentConfig& cfg);

/// Coverage experiment per delta in the sweep.
std::vector<ExperimentReport> run_length_experiment(
    ExperimentConfig base, const std::vector<double>& deltas);

struct TimingRow {
  int n = 0;
  int trials = 0;
  int failures = 0;
  double median_ms = 0.0;
  double max_ms = 0.0;
};

/// Serial timing sweep over n = m sizes; a trial counts as failed when it
/// throws or exceeds timeout_s.
std::vector<TimingRow> run_timing_experiment(ExperimentConfig base,
                                             const std::vector<int>& sizes,
                                             double timeout_s = 300.0);

/// Robustness runs; family labels: gaussian, laplace, skew_normal,
/// student_t (known variance) and "estimated" (Gaussian noise, pooled
/// variance estimate).
std::vector<std::pair<std::string, ExperimentReport>> run_robustness_experiment(
    ExperimentConfig base, const std::vector<std::string>& families);

/// Pooled variance of the residuals about each sample's column means.
double pooled_variance(const Eigen::MatrixXd& x_rows,
                       const Eigen::MatrixXd& y_rows);

enum class SigmaMode { fixed, estimated };

struct SubsampleOptions {
  int n = -1;  // -1: keep all rows
  int m = -1;
  std::uint64_t seed = 0;
};

/// Builds an instance from two CSV samples with identity covariance
/// (sigma2 fixed or pooled-estimated).
ProblemInstance load_two_sample_csv(const std::string& path_x,
                                    const std::string& path_y, SigmaMode mode,
                                    double sigma2, bool skip_header,
                                    const SubsampleOptions& sub = {});

/// Same, with full covariance matrices loaded from row-major CSV files.
ProblemInstance load_two_sample_csv_cov(const std::string& path_x,
                                        const std::string& path_y,
                                        const std::string& cov_x_path,
                                        const std::string& cov_y_path,
                                        bool skip_header);

/// --- deterministic report documents (no wall-clock content) ---

/// One aggregate record; pure function of the trial outcomes.
std::string aggregate_json(const ExperimentReport& report);

/// {"schema":1,"kind":<kind>,"records":[...]} for a sweep.
std::string sweep_json(const std::string& kind,
                       const std::vector<ExperimentReport>& reports);

std::string robustness_json(
    const std::vector<std::pair<std::string, ExperimentReport>>& runs);

/// {"schema":1,"kind":"benchmark","rows":[...]} — timing content, exempt
/// from the byte-determinism contract.
std::string timing_json(const std::vector<TimingRow>& rows);

/// Per-trial detail: trial, z_obs, distance, sel_lo, sel_hi, naive_lo,
/// naive_hi, covered_sel, covered_naive, degenerate, wall_ms.
void write_trials_csv(std::ostream& out, const ExperimentReport& report);

}  // namespace wassci
