// Command-line driver: selective confidence intervals for the Wasserstein
// distance between two noisy samples, plus the synthetic experiment sweeps.
//
// Exit codes: 0 success, 2 degeneracy refusal, 3 parse/usage errors,
// 4 numerical failure.

#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wassci/harness.hpp"
#include "wassci/inference.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDegenerate = 2;
constexpr int kExitParse = 3;
constexpr int kExitNumerical = 4;

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw wassci::Error("cannot open output file '" + path + "'");
  out << content;
}

std::string format_bound(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

void dump_lp(const std::string& path, const wassci::TransportProblem& tp,
             const wassci::LpSolution& sol) {
  std::ostringstream out;
  out << tp.n << ' ' << tp.m << '\n';
  char buf[64];
  for (Eigen::Index i = 0; i < tp.cost_vec.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", tp.cost_vec(i));
    out << (i ? " " : "") << buf;
  }
  out << '\n';
  for (std::size_t i = 0; i < sol.basis.size(); ++i)
    out << (i ? " " : "") << sol.basis[i] + 1;
  out << '\n';
  write_file(path, out.str());
}

struct CiArgs {
  std::string x_path, y_path;
  double alpha = 0.05;
  double sigma = 1.0;
  bool sigma_given = false;
  bool estimate_sigma = false;
  std::string cov_x, cov_y;
  bool allow_degenerate = false;
  bool header = false;
  std::string out_path, dump_lp_path;
  int subsample_n = -1, subsample_m = -1;
  std::uint64_t subsample_seed = 0;
};

int cmd_ci(const CiArgs& args) {
  using namespace wassci;
  ProblemInstance inst = [&] {
    SubsampleOptions sub{args.subsample_n, args.subsample_m, args.subsample_seed};
    if (!args.cov_x.empty())
      return load_two_sample_csv_cov(args.x_path, args.y_path, args.cov_x,
                                     args.cov_y, args.header);
    const SigmaMode mode =
        args.estimate_sigma ? SigmaMode::estimated : SigmaMode::fixed;
    return load_two_sample_csv(args.x_path, args.y_path, mode,
                               args.sigma * args.sigma, args.header, sub);
  }();

  InferenceOptions opts;
  opts.alpha = args.alpha;
  opts.allow_degenerate = args.allow_degenerate;
  const InferenceResult res = run_algorithm_1(inst, opts);

  if (!args.dump_lp_path.empty()) {
    const CostDecomposition costs = build_cost_decomposition(inst);
    const TransportProblem tp = build_transport_problem(inst, costs);
    dump_lp(args.dump_lp_path, tp, res.solution);
  }
  if (!args.out_path.empty()) {
    // report record with the schema marker on top
    std::string body = report_json(res);
    write_file(args.out_path, "{\n  \"schema\": 1,\n" + body.substr(2));
  }
  std::cout << "distance=" << res.distance << " z_obs=" << res.z_obs
            << " selective=[" << format_bound(res.ci_selective.lo) << ", "
            << format_bound(res.ci_selective.hi) << "] naive=["
            << format_bound(res.ci_naive.lo) << ", "
            << format_bound(res.ci_naive.hi) << "] alpha=" << res.alpha
            << (res.degenerate ? " degenerate=true" : "") << '\n';
  return kExitOk;
}

struct SimArgs {
  int n = 5, m = 5, d = 1;
  std::vector<double> deltas{0, 1, 2, 3, 4};
  std::string noise = "gaussian";
  std::string variance = "known";
  int trials = 1000;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  int jobs = 1;
  bool strict_degenerate = false;
  std::string out_path, trials_csv_prefix;
};

wassci::ExperimentConfig to_config(const SimArgs& args) {
  wassci::ExperimentConfig cfg;
  cfg.n = args.n;
  cfg.m = args.m;
  cfg.d = args.d;
  cfg.noise = wassci::parse_noise_family(args.noise);
  cfg.variance_mode = args.variance == "estimated"
                          ? wassci::VarianceMode::estimated
                          : wassci::VarianceMode::known;
  cfg.trials = args.trials;
  cfg.alpha = args.alpha;
  cfg.seed = args.seed;
  cfg.parallelism = args.jobs;
  cfg.allow_degenerate = !args.strict_degenerate;
  return cfg;
}

void maybe_write_trial_csvs(const SimArgs& args,
                            const std::vector<wassci::ExperimentReport>& reports) {
  if (args.trials_csv_prefix.empty()) return;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    std::ostringstream path;
    path << args.trials_csv_prefix << "_delta" << i << ".csv";
    std::ofstream out(path.str(), std::ios::binary);
    if (!out) throw wassci::Error("cannot open '" + path.str() + "'");
    wassci::write_trials_csv(out, reports[i]);
  }
}

int cmd_simulate(const SimArgs& args, const std::string& kind) {
  using namespace wassci;
  const std::vector<ExperimentReport> reports =
      run_length_experiment(to_config(args), args.deltas);
  const std::string doc = sweep_json(kind, reports);
  if (!args.out_path.empty()) write_file(args.out_path, doc);
  maybe_write_trial_csvs(args, reports);
  std::cout << kind << ": " << reports.size() << " delta value(s), "
            << args.trials << " trials each";
  for (std::size_t i = 0; i < reports.size(); ++i)
    std::cout << (i ? "," : ":") << " cov_sel[" << args.deltas[i]
              << "]=" << reports[i].coverage_selective;
  std::cout << '\n';
  return kExitOk;
}

int cmd_benchmark(const SimArgs& args, const std::vector<int>& sizes,
                  double delta) {
  using namespace wassci;
  ExperimentConfig cfg = to_config(args);
  cfg.delta = delta;
  const std::vector<TimingRow> rows = run_timing_experiment(cfg, sizes);
  const std::string doc = timing_json(rows);
  if (!args.out_path.empty()) write_file(args.out_path, doc);
  std::cout << "benchmark:";
  for (const TimingRow& row : rows)
    std::cout << " n=" << row.n << " median_ms=" << row.median_ms
              << (row.failures ? " FAILURES" : "");
  std::cout << '\n';
  return kExitOk;
}

int cmd_robustness(const SimArgs& args, const std::vector<std::string>& families,
                   double delta) {
  using namespace wassci;
  ExperimentConfig cfg = to_config(args);
  cfg.delta = delta;
  const auto runs = run_robustness_experiment(cfg, families);
  const std::string doc = robustness_json(runs);
  if (!args.out_path.empty()) write_file(args.out_path, doc);
  std::cout << "robustness:";
  for (const auto& [family, report] : runs)
    std::cout << ' ' << family << "=" << report.coverage_selective;
  std::cout << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"selective confidence intervals for the Wasserstein distance"};
  app.require_subcommand(1);

  auto alpha_check = CLI::Validator(
      [](std::string& s) -> std::string {
        const double a = std::strtod(s.c_str(), nullptr);
        if (!(a > 0.0 && a < 1.0)) return "alpha must lie in (0,1)";
        return {};
      },
      "ALPHA");

  CiArgs ci;
  CLI::App* ci_cmd = app.add_subcommand(
      "ci", "confidence interval for the distance between two CSV samples");
  ci_cmd->add_option("--x", ci.x_path, "source sample CSV")
      ->required()
      ->check(CLI::ExistingFile);
  ci_cmd->add_option("--y", ci.y_path, "target sample CSV")
      ->required()
      ->check(CLI::ExistingFile);
  ci_cmd->add_option("--alpha", ci.alpha, "significance level")
      ->check(alpha_check);
  auto* sigma_opt =
      ci_cmd->add_option("--sigma", ci.sigma, "known noise standard deviation");
  auto* est_opt = ci_cmd->add_flag("--estimate-sigma", ci.estimate_sigma,
                                   "estimate the noise variance from the data");
  est_opt->excludes(sigma_opt);
  auto* covx_opt = ci_cmd->add_option("--cov-x", ci.cov_x,
                                      "full covariance of vec(X), row-major CSV")
                       ->check(CLI::ExistingFile);
  auto* covy_opt = ci_cmd->add_option("--cov-y", ci.cov_y,
                                      "full covariance of vec(Y), row-major CSV")
                       ->check(CLI::ExistingFile);
  covx_opt->needs(covy_opt);
  covy_opt->needs(covx_opt);
  covx_opt->excludes(sigma_opt)->excludes(est_opt);
  ci_cmd->add_flag("--allow-degenerate", ci.allow_degenerate,
                   "proceed on degenerate optima (results carry a warning)");
  ci_cmd->add_flag("--header", ci.header, "skip one header line in the CSVs");
  ci_cmd->add_option("--out", ci.out_path, "write the JSON report here");
  ci_cmd->add_option("--dump-lp", ci.dump_lp_path,
                     "write the LP (sizes, costs, basis) as plain text");
  ci_cmd->add_option("--subsample-n", ci.subsample_n, "subsample X to n rows");
  ci_cmd->add_option("--subsample-m", ci.subsample_m, "subsample Y to m rows");
  ci_cmd->add_option("--subsample-seed", ci.subsample_seed, "subsampling seed");

  SimArgs sim;
  std::vector<int> bench_sizes{50, 60, 70, 80};
  std::vector<std::string> families{"laplace", "skew_normal", "student_t",
                                    "estimated"};
  double single_delta = 2.0;

  auto add_common = [&](CLI::App* cmd, bool with_delta_list) {
    cmd->add_option("--n", sim.n, "source sample size");
    cmd->add_option("--m", sim.m, "target sample size");
    cmd->add_option("--d", sim.d, "dimension");
    if (with_delta_list)
      cmd->add_option("--delta", sim.deltas, "mean-shift sweep")->delimiter(',');
    cmd->add_option("--noise", sim.noise, "noise family")
        ->check(CLI::IsMember({"gaussian", "laplace", "skew_normal", "student_t"}));
    cmd->add_option("--variance", sim.variance, "variance mode")
        ->check(CLI::IsMember({"known", "estimated"}));
    cmd->add_option("--trials", sim.trials, "trials per configuration")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--alpha", sim.alpha, "significance level")->check(alpha_check);
    cmd->add_option("--seed", sim.seed, "master seed");
    cmd->add_option("--jobs", sim.jobs, "worker threads")
        ->check(CLI::PositiveNumber);
    cmd->add_flag("--strict-degenerate", sim.strict_degenerate,
                  "refuse degenerate optima (trials excluded and counted)");
    cmd->add_option("--out", sim.out_path, "write the aggregate JSON here");
    cmd->add_option("--trials-csv", sim.trials_csv_prefix,
                    "write per-trial CSV files with this path prefix");
  };

  CLI::App* cov_cmd =
      app.add_subcommand("simulate-coverage", "coverage sweep over delta");
  add_common(cov_cmd, true);
  CLI::App* len_cmd =
      app.add_subcommand("simulate-length", "CI-length sweep over delta");
  add_common(len_cmd, true);
  CLI::App* bench_cmd =
      app.add_subcommand("benchmark", "timing sweep over n = m sizes");
  add_common(bench_cmd, false);
  bench_cmd->add_option("--sizes,--n-sizes", bench_sizes, "n = m sizes")
      ->delimiter(',');
  bench_cmd->add_option("--delta", single_delta, "mean shift for the timing runs");
  CLI::App* robust_cmd = app.add_subcommand(
      "robustness", "coverage under non-Gaussian noise and estimated variance");
  add_common(robust_cmd, false);
  robust_cmd->add_option("--families", families,
                         "subset of {gaussian,laplace,skew_normal,student_t,estimated}")
      ->delimiter(',');
  robust_cmd->add_option("--delta", single_delta,
                         "mean shift for the robustness runs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitParse;
  }

  try {
    if (ci_cmd->parsed()) return cmd_ci(ci);
    if (cov_cmd->parsed()) return cmd_simulate(sim, "coverage");
    if (len_cmd->parsed()) return cmd_simulate(sim, "length");
    if (bench_cmd->parsed()) {
      if (bench_cmd->count("--trials") == 0) sim.trials = 10;
      return cmd_benchmark(sim, bench_sizes, single_delta);
    }
    if (robust_cmd->parsed())
      return cmd_robustness(sim, families, single_delta);
  } catch (const wassci::DegenerateSolution& e) {
    std::cerr << "error: " << e.what() << " (re-run with --allow-degenerate)\n";
    return kExitDegenerate;
  } catch (const wassci::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitParse;
  } catch (const wassci::DimensionMismatch& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitParse;
  } catch (const wassci::InvalidInstance& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitParse;
  } catch (const wassci::DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitParse;
  } catch (const wassci::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitParse;
}
