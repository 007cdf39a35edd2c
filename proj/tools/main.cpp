#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "dtam/experiment.hpp"
#include "dtam/io.hpp"
#include "dtam/metrics.hpp"
#include "dtam/pursuit.hpp"
#include "dtam/rng.hpp"
#include "dtam/theory.hpp"

namespace {

using namespace dtam;

std::string derive_aggregate_path(const std::string& rows_path) {
  const auto dot = rows_path.rfind(".csv");
  if (dot == std::string::npos) return rows_path + "_agg.csv";
  return rows_path.substr(0, dot) + "_agg.csv";
}

struct MeanOptions {
  std::string family = "log_sum_exp";
  double sigma = 1.0;
  double l = 2.0;

  MeanFunctionSpec to_spec() const {
    MeanFunctionSpec spec;
    spec.family = mean_family_from_string(family);
    spec.sigma = sigma;
    spec.l = l;
    return spec;
  }
};

void add_mean_options(CLI::App* cmd, MeanOptions& opts) {
  cmd->add_option("--mean", opts.family,
                  "mean function family: log_sum_exp, power, delta11, "
                  "delta12, lp_norm")
      ->capture_default_str();
  cmd->add_option("--sigma", opts.sigma, "mean function sigma")
      ->capture_default_str();
  cmd->add_option("--l", opts.l, "mean function exponent / norm order")
      ->capture_default_str();
}

int run_phase_transition_cmd(const ExperimentConfig& cfg,
                             const std::string& out,
                             const std::string& out_agg) {
  const PhaseTransitionResult result = run_phase_transition(cfg);
  write_rows_csv(result, out);
  write_aggregate_csv(result, out_agg.empty() ? derive_aggregate_path(out) : out_agg);
  std::printf("wrote %zu trial rows to %s\n", result.rows.size(), out.c_str());
  for (const CellAggregate& a : result.aggregates) {
    std::string freq = "na";
    if (!std::isnan(a.success_freq)) {
      char buf[16];
      std::snprintf(buf, sizeof(buf), "%.3f", a.success_freq);
      freq = buf;
    }
    std::printf("%-7s k=%-4d freq=%s  mean_time=%.1f ms\n",
                to_string(a.algorithm).c_str(), a.k, freq.c_str(),
                a.mean_time_ms);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sparse recovery toolkit: dynamic thresholding with memory, "
               "baselines, theory constants and benchmark harness"};
  app.require_subcommand(1);
  app.set_config("--config", "", "flat key=value config file");

  // ---- phase-transition ----
  ExperimentConfig pt;
  std::vector<std::string> pt_algos;
  std::string pt_out_agg;
  bool pt_no_timing = false;
  bool pt_full_scale = false;
  MeanOptions pt_mean;
  auto* pt_cmd = app.add_subcommand(
      "phase-transition", "seeded success-frequency sweep over sparsity levels");
  pt_cmd->add_option("--n", pt.n, "signal length")->capture_default_str();
  pt_cmd->add_option("--m", pt.m, "measurement count")->capture_default_str();
  pt_cmd->add_option("--k-grid", pt.k_grid, "comma-separated sparsity levels")
      ->delimiter(',');
  pt_cmd->add_option("--trials", pt.trials, "trials per cell")->capture_default_str();
  pt_cmd->add_option("--algorithms", pt_algos,
                     "comma-separated: dtam,pgrotp,omp,sp,stomp")
      ->delimiter(',');
  pt_cmd->add_option("--base-seed", pt.base_seed, "base seed")->capture_default_str();
  pt_cmd->add_option("--gamma", pt.algo.gamma, "selection parameter gamma")
      ->capture_default_str();
  pt_cmd->add_option("--beta", pt.algo.beta, "forgetting factor beta")
      ->capture_default_str();
  pt_cmd->add_option("--stomp-threshold", pt.algo.stomp_threshold,
                     "stagewise threshold t_s")->capture_default_str();
  pt_cmd->add_option("--noise-level", pt.noise_level,
                     "relative noise norm; > 0 switches to the relative-change stop")
      ->capture_default_str();
  pt_cmd->add_option("--threads", pt.threads, "worker threads (0 = hardware)")
      ->capture_default_str();
  pt_cmd->add_flag("--no-timing", pt_no_timing,
                   "write time_ms as 0 for byte-reproducible output");
  pt_cmd->add_flag("--full-scale", pt_full_scale,
                   "n=4000, m=800, 100 trials, k=10..360 (long run)");
  add_mean_options(pt_cmd, pt_mean);
  pt_cmd->add_option("--out", pt.output_path, "trial rows CSV path")
      ->capture_default_str();
  pt_cmd->add_option("--out-agg", pt_out_agg, "aggregate CSV path");
  pt_cmd->callback([&]() {
    if (pt_full_scale) {
      pt.n = 4000;
      pt.m = 800;
      pt.trials = 100;
      pt.k_grid.clear();
      for (int j = 1; j <= 71; ++j) pt.k_grid.push_back(5 + 5 * j);
    }
    if (!pt_algos.empty()) {
      pt.algorithms.clear();
      for (const std::string& name : pt_algos) {
        pt.algorithms.push_back(algorithm_from_string(name));
      }
    }
    pt.algo.mean_function = pt_mean.to_spec();
    pt.record_timing = !pt_no_timing;
    run_phase_transition_cmd(pt, pt.output_path, pt_out_agg);
  });

  // ---- recover ----
  int rc_n = 400, rc_m = 80, rc_k = 10;
  std::uint64_t rc_seed = 1;
  std::string rc_matrix, rc_y, rc_alg = "dtam", rc_trace_out;
  double rc_gamma = 0.1, rc_beta = 0.4, rc_noise = 0.0;
  MeanOptions rc_mean;
  auto* rc_cmd = app.add_subcommand("recover", "solve one instance");
  rc_cmd->add_option("--matrix", rc_matrix, "matrix file (.csv or .bin)");
  rc_cmd->add_option("--y", rc_y, "measurement vector file (m x 1)");
  rc_cmd->add_option("--n", rc_n, "generated instance length")->capture_default_str();
  rc_cmd->add_option("--m", rc_m, "generated measurement count")->capture_default_str();
  rc_cmd->add_option("--k", rc_k, "sparsity level")->capture_default_str();
  rc_cmd->add_option("--seed", rc_seed, "instance seed")->capture_default_str();
  rc_cmd->add_option("--algorithm", rc_alg, "dtam,pgrotp,omp,sp,stomp")
      ->capture_default_str();
  rc_cmd->add_option("--gamma", rc_gamma, "gamma")->capture_default_str();
  rc_cmd->add_option("--beta", rc_beta, "beta")->capture_default_str();
  rc_cmd->add_option("--noise-level", rc_noise, "relative noise level")
      ->capture_default_str();
  rc_cmd->add_option("--trace-out", rc_trace_out, "per-iteration trace CSV");
  add_mean_options(rc_cmd, rc_mean);
  rc_cmd->callback([&]() {
    const Algorithm alg = algorithm_from_string(rc_alg);
    AlgoConfig config = AlgoConfig::defaults_for(alg);
    config.gamma = rc_gamma;
    config.beta = rc_beta;
    config.mean_function = rc_mean.to_spec();

    std::optional<RecoveryProblem> problem;
    if (!rc_matrix.empty()) {
      if (rc_y.empty()) {
        throw std::invalid_argument("recover: --matrix requires --y");
      }
      DenseMatrix A{load_matrix_auto(rc_matrix)};
      const Mat ym = load_matrix_auto(rc_y);
      problem.emplace(std::move(A), Vec(ym.col(0)), rc_k);
    } else {
      problem = gen_instance(rc_n, rc_m, rc_k, rc_seed);
      if (rc_noise > 0.0) {
        SplitMix64 rng(seed_mix(rc_seed, {0x6E015EULL}));
        Vec nu(problem->y.size());
        for (Eigen::Index i = 0; i < nu.size(); ++i) nu[i] = rng.next_gaussian();
        nu *= rc_noise * problem->y.norm() / nu.norm();
        Vec y_noisy = problem->y + nu;
        RecoveryProblem noisy(problem->A, std::move(y_noisy), problem->k,
                              problem->ground_truth, std::move(nu));
        problem = std::move(noisy);
        config.residual_tol = 0.0;
        config.rel_change_tol = 1e-3;
      }
    }

    const auto [x, trace] = run_algorithm(alg, *problem, config);
    const Vec res = problem->y - problem->A.mat() * x;
    std::printf("algorithm:      %s\n", to_string(alg).c_str());
    std::printf("iterations:     %zu\n", trace.iterates.size());
    std::printf("stop reason:    %s\n", to_string(trace.stop_reason).c_str());
    std::printf("residual norm:  %.6e\n", res.norm());
    std::printf("nonzeros:       %d\n", support_of(x).size());
    if (problem->ground_truth) {
      const Vec& truth = *problem->ground_truth;
      const double rel = (x - truth).norm() / truth.norm();
      std::printf("rel error:      %.6e\n", rel);
      std::printf("success(1e-3):  %s\n", rel <= 1e-3 ? "yes" : "no");
    }
    if (!rc_trace_out.empty()) {
      std::ofstream out(rc_trace_out);
      if (!out) throw std::runtime_error("cannot open " + rc_trace_out);
      out << "iteration,support_size,residual_norm,q,wall_time_s\n";
      for (const IterationRecord& it : trace.iterates) {
        out << it.iteration << ',' << it.support.size() << ','
            << it.residual_norm << ','
            << (it.selected_q ? std::to_string(*it.selected_q) : "na") << ','
            << it.wall_time_s << '\n';
      }
    }
  });

  // ---- signal-demo ----
  int sd_n = 1024, sd_levels = 5;
  double sd_kappa = 0.5;
  std::string sd_wavelet = "haar", sd_alg = "dtam";
  std::uint64_t sd_seed = 7;
  bool sd_sparse = false;
  auto* sd_cmd = app.add_subcommand(
      "signal-demo", "1-D wavelet compressed-sensing reconstruction demo");
  sd_cmd->add_option("--n", sd_n, "signal length (divisible by 2^levels)")
      ->capture_default_str();
  sd_cmd->add_option("--kappa", sd_kappa, "sampling rate in (0,1)")
      ->capture_default_str();
  sd_cmd->add_option("--levels", sd_levels, "wavelet levels")->capture_default_str();
  sd_cmd->add_option("--wavelet", sd_wavelet, "haar or db2")->capture_default_str();
  sd_cmd->add_option("--algorithm", sd_alg, "recovery algorithm")
      ->capture_default_str();
  sd_cmd->add_option("--seed", sd_seed, "measurement matrix seed")
      ->capture_default_str();
  sd_cmd->add_flag("--sparse-coeffs", sd_sparse,
                   "use the k-term approximation of the test signal (exactly "
                   "sparse coefficients)");
  sd_cmd->callback([&]() {
    const WaveletSpec spec{wavelet_from_string(sd_wavelet), sd_levels};
    std::printf("# synthetic piecewise-smooth test signal (no recorded audio "
                "is bundled)\n");
    const SignalDemoReport rep = signal_demo(
        sd_n, sd_kappa, spec, algorithm_from_string(sd_alg), sd_seed, sd_sparse);
    std::printf("n=%d m=%d k=%d kappa=%.3f wavelet=%s levels=%d\n", rep.n,
                rep.m, rep.k, rep.kappa, sd_wavelet.c_str(), sd_levels);
    if (std::isinf(rep.snr_db)) {
      std::printf("SNR: inf dB (exact reconstruction)\n");
    } else {
      std::printf("SNR: %.2f dB\n", rep.snr_db);
    }
    std::printf("coefficient rel error: %.3e\n", rep.coeff_rel_error);
    std::printf("iterations: %d (stop: %s)\n", rep.iterations,
                to_string(rep.stop_reason).c_str());
  });

  // ---- theory ----
  TheoryReportRequest th;
  MeanOptions th_mean;
  std::string th_matrix;
  int th_matrix_k = 0;
  double th_dk = -1.0, th_d2k = -1.0, th_d3k = -1.0;
  auto* th_cmd = app.add_subcommand(
      "theory", "evaluate convergence constants and thresholds");
  th_cmd->add_option("--gamma", th.gamma, "gamma")->capture_default_str();
  th_cmd->add_option("--beta", th.beta, "beta")->capture_default_str();
  th_cmd->add_option("--k", th.k, "sparsity level for the mean function")
      ->capture_default_str();
  th_cmd->add_option("--delta-k", th_dk, "RIC of order k");
  th_cmd->add_option("--delta-2k", th_d2k, "RIC of order 2k");
  th_cmd->add_option("--delta-3k", th_d3k, "RIC of order 3k");
  th_cmd->add_option("--matrix", th_matrix, "matrix file for brute-forced RICs");
  th_cmd->add_option("--sparsity", th_matrix_k, "k for the matrix RICs");
  add_mean_options(th_cmd, th_mean);
  th_cmd->callback([&]() {
    th.mean_function = th_mean.to_spec();
    if (th_dk >= 0.0) th.delta_k = th_dk;
    if (th_d2k >= 0.0) th.delta_2k = th_d2k;
    if (th_d3k >= 0.0) th.delta_3k = th_d3k;
    if (!th_matrix.empty()) th.matrix_path = th_matrix;
    if (th_matrix_k > 0) th.matrix_sparsity = th_matrix_k;

    const TheoryReport rep = make_theory_report(th);
    std::printf("delta_star        %.12f\n", rep.delta_star);
    std::printf("g(gamma)          %.12f\n", rep.g.g);
    std::printf("  c               %.12f\n", rep.g.c);
    std::printf("  ||grad f(0)||   %.12f\n", rep.g.grad_norm);
    std::printf("  lambda_star     %.12f\n", rep.g.lambda_star);
    std::printf("delta(gamma)      %.12f\n", rep.delta_gamma);
    if (rep.constants) {
      const TheoryConstants& tc = *rep.constants;
      std::printf("delta_k           %.12f\n", tc.delta_k);
      std::printf("delta_2k          %.12f\n", tc.delta_2k);
      std::printf("delta_3k          %.12f\n", tc.delta_3k);
      std::printf("C1                %.12f\n", tc.C1);
      std::printf("C2                %.12f\n", tc.C2);
      std::printf("rho_tilde         %.12f\n", tc.rho_tilde);
      std::printf("rho               %.12f\n", tc.rho);
      std::printf("C_beta            %.12f\n", tc.C_beta);
      std::printf("beta_max          %.12f\n", tc.beta_max);
      std::printf("regime            %s\n", tc.regime_ok ? "ok" : "violated");
    }
    if (rep.pg_constants) {
      std::printf("rho_hat           %.12f\n", rep.pg_constants->rho_hat);
      std::printf("C_hat             %.12f\n", rep.pg_constants->C_hat);
    }
  });

  // ---- ric ----
  std::string ric_matrix;
  int ric_k = 1;
  auto* ric_cmd =
      app.add_subcommand("ric", "brute-force restricted isometry constant");
  ric_cmd->add_option("--matrix", ric_matrix, "matrix file")->required();
  ric_cmd->add_option("--k", ric_k, "order")->capture_default_str();
  ric_cmd->callback([&]() {
    const DenseMatrix A{load_matrix_auto(ric_matrix)};
    std::printf("delta_%d = %.15f\n", ric_k, ric_bruteforce(A, ric_k));
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 0;
}
