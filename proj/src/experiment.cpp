#include "dtam/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "dtam/io.hpp"
#include "dtam/metrics.hpp"
#include "dtam/ops.hpp"
#include "dtam/pursuit.hpp"
#include "dtam/rng.hpp"

namespace dtam {

namespace {

void parallel_for(int tasks, int threads, const std::function<void(int)>& body) {
  if (threads <= 0) {
    threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads <= 0) threads = 1;
  }
  threads = std::min(threads, tasks);
  if (threads <= 1) {
    for (int i = 0; i < tasks; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&]() {
      for (int i = next.fetch_add(1); i < tasks; i = next.fetch_add(1)) {
        body(i);
      }
    });
  }
  for (auto& th : pool) th.join();
}

std::string format_double(double v, const char* fmt) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

}  // namespace

RecoveryProblem gen_instance(int n, int m, int k, std::uint64_t seed) {
  if (!(k >= 1 && k <= m && m < n)) {
    throw std::invalid_argument("gen_instance: need 1 <= k <= m < n");
  }
  SplitMix64 rng(seed);

  Mat ahat(m, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < m; ++i) ahat(i, j) = rng.next_gaussian();
  }
  DenseMatrix A = normalize_columns(DenseMatrix(std::move(ahat)));

  // Uniform support via a partial Fisher-Yates shuffle.
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  for (int i = 0; i < k; ++i) {
    const int j = i + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n - i)));
    std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
  }
  Vec x_star = Vec::Zero(n);
  for (int i = 0; i < k; ++i) {
    x_star[perm[static_cast<std::size_t>(i)]] = rng.next_gaussian();
  }

  Vec y = A.mat() * x_star;
  return RecoveryProblem(std::move(A), std::move(y), k, std::move(x_star));
}

void ExperimentConfig::validate() const {
  if (!(m < n)) throw std::invalid_argument("ExperimentConfig: need m < n");
  if (trials < 0) throw std::invalid_argument("ExperimentConfig: trials < 0");
  for (int k : effective_k_grid()) {
    if (k < 1 || k > m) {
      throw std::invalid_argument("ExperimentConfig: k values must lie in [1,m]");
    }
  }
  if (noise_level < 0.0) {
    throw std::invalid_argument("ExperimentConfig: noise_level < 0");
  }
  algo.validate();
}

std::vector<int> ExperimentConfig::effective_k_grid() const {
  if (!k_grid.empty()) return k_grid;
  std::vector<int> grid;
  for (int k = 5; k <= 75 && k <= m; k += 5) grid.push_back(k);
  return grid;
}

std::vector<Algorithm> ExperimentConfig::effective_algorithms() const {
  if (!algorithms.empty()) return algorithms;
  return {Algorithm::dtam, Algorithm::pgrotp, Algorithm::omp, Algorithm::sp};
}

PhaseTransitionResult run_phase_transition(const ExperimentConfig& config) {
  config.validate();
  const std::vector<Algorithm> algs = config.effective_algorithms();
  const std::vector<int> grid = config.effective_k_grid();
  const int trials = config.trials;

  struct Task {
    Algorithm alg;
    int k;
    int trial;
  };
  std::vector<Task> tasks;
  for (Algorithm alg : algs) {
    for (int k : grid) {
      for (int t = 0; t < trials; ++t) tasks.push_back({alg, k, t});
    }
  }

  std::vector<TrialResult> rows(tasks.size());
  parallel_for(static_cast<int>(tasks.size()), config.threads, [&](int idx) {
    const Task& task = tasks[static_cast<std::size_t>(idx)];
    const std::uint64_t seed = seed_mix(
        config.base_seed,
        {static_cast<std::uint64_t>(algorithm_id(task.alg)),
         static_cast<std::uint64_t>(task.k),
         static_cast<std::uint64_t>(task.trial)});

    RecoveryProblem problem = gen_instance(config.n, config.m, task.k, seed);
    AlgoConfig algo = config.algo;
    algo.max_iters = AlgoConfig::defaults_for(task.alg).max_iters;
    if (config.noise_level > 0.0) {
      // Noisy mode: perturb measurements and stop on relative change.
      SplitMix64 noise_rng(seed_mix(seed, {0x6E015EULL}));
      Vec nu(config.m);
      for (int i = 0; i < config.m; ++i) nu[i] = noise_rng.next_gaussian();
      nu *= config.noise_level * problem.y.norm() / nu.norm();
      Vec y_noisy = problem.y + nu;
      problem = RecoveryProblem(problem.A, std::move(y_noisy), problem.k,
                                problem.ground_truth, std::move(nu));
      algo.residual_tol = 0.0;
      algo.rel_change_tol = algo.rel_change_tol > 0.0 ? algo.rel_change_tol : 1e-3;
    }

    const auto t0 = std::chrono::steady_clock::now();
    const auto [x, trace] = run_algorithm(task.alg, problem, algo);
    const double elapsed_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
            .count();

    const Vec& truth = *problem.ground_truth;
    const double rel_error = (x - truth).norm() / truth.norm();

    TrialResult& row = rows[static_cast<std::size_t>(idx)];
    row.algorithm = task.alg;
    row.k = task.k;
    row.trial = task.trial;
    row.seed = seed;
    row.rel_error = rel_error;
    if (config.noise_level == 0.0) row.success = rel_error <= 1e-3;
    row.iterations = static_cast<int>(trace.iterates.size());
    row.time_ms = config.record_timing ? elapsed_ms : 0.0;
  });

  PhaseTransitionResult result;
  result.rows = std::move(rows);
  for (Algorithm alg : algs) {
    for (int k : grid) {
      CellAggregate agg;
      agg.algorithm = alg;
      agg.k = k;
      double time_sum = 0.0;
      int successes = 0;
      for (const TrialResult& r : result.rows) {
        if (r.algorithm != alg || r.k != k) continue;
        ++agg.trials;
        time_sum += r.time_ms;
        if (r.success && *r.success) ++successes;
      }
      agg.success_freq =
          config.noise_level > 0.0
              ? std::numeric_limits<double>::quiet_NaN()
              : (agg.trials > 0 ? static_cast<double>(successes) / agg.trials : 0.0);
      agg.mean_time_ms = agg.trials > 0 ? time_sum / agg.trials : 0.0;
      result.aggregates.push_back(agg);
    }
  }
  return result;
}

void write_rows_csv(const PhaseTransitionResult& result, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "algorithm,k,trial,seed,success,rel_error,iterations,time_ms\n";
  for (const TrialResult& r : result.rows) {
    out << to_string(r.algorithm) << ',' << r.k << ',' << r.trial << ','
        << r.seed << ',' << (r.success ? (*r.success ? "1" : "0") : "na")
        << ',' << format_double(r.rel_error, "%.17g") << ',' << r.iterations
        << ',' << format_double(r.time_ms, "%.3f") << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

void write_aggregate_csv(const PhaseTransitionResult& result,
                         const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "algorithm,k,trials,success_freq,mean_time_ms\n";
  for (const CellAggregate& a : result.aggregates) {
    out << to_string(a.algorithm) << ',' << a.k << ',' << a.trials << ','
        << (std::isnan(a.success_freq) ? std::string("na")
                                       : format_double(a.success_freq, "%.6f"))
        << ',' << format_double(a.mean_time_ms, "%.3f") << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

Vec demo_signal(int n) {
  // Piecewise-smooth stand-in for a natural 1-D signal: a low-frequency
  // tone, a triangular ramp, and a decaying chirp with two jumps.
  const double pi = 3.14159265358979323846;
  Vec d(n);
  for (int i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / n;
    double v;
    if (t < 0.35) {
      v = std::sin(6.0 * pi * t);
    } else if (t < 0.7) {
      v = 1.5 - 6.0 * std::abs(t - 0.5);
    } else {
      v = 0.8 * std::sin(24.0 * pi * t) * std::exp(-3.0 * (t - 0.7)) + 0.25;
    }
    d[i] = v;
  }
  return d;
}

SignalDemoReport signal_demo(int n, double kappa, const WaveletSpec& wavelet,
                             Algorithm alg, std::uint64_t seed,
                             bool sparse_coeffs,
                             const AlgoConfig* base_config) {
  if (!(kappa > 0.0 && kappa < 1.0)) {
    throw std::invalid_argument("signal_demo: kappa must lie in (0,1)");
  }
  const int m = static_cast<int>(std::ceil(kappa * n));
  const int k = static_cast<int>(std::ceil(0.3 * m));

  Vec d = demo_signal(n);
  if (sparse_coeffs) {
    // Replace the signal by its k-term wavelet approximation so that the
    // coefficient vector is exactly k-sparse.
    d = idwt(hard_threshold(dwt(d, wavelet), k), wavelet);
  }

  SplitMix64 rng(seed);
  Mat bhat(m, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < m; ++i) bhat(i, j) = rng.next_gaussian();
  }
  const DenseMatrix B = normalize_columns(DenseMatrix(std::move(bhat)));

  // A = B Phi^T: row i of A is the analysis transform of row i of B.
  Mat a_rows(m, n);
  for (int i = 0; i < m; ++i) {
    a_rows.row(i) = dwt(B.mat().row(i).transpose(), wavelet).transpose();
  }
  DenseMatrix A{std::move(a_rows)};

  const Vec y = B.mat() * d;
  const Vec x_true = dwt(d, wavelet);

  AlgoConfig config = base_config ? *base_config : AlgoConfig{};
  config.max_iters = AlgoConfig::defaults_for(alg).max_iters;
  if (!sparse_coeffs) {
    // Compressible, not exactly sparse: use the relative-change rule.
    config.residual_tol = 0.0;
    if (config.rel_change_tol <= 0.0) config.rel_change_tol = 1e-3;
  }

  const RecoveryProblem problem(A, y, k);
  const auto [x_hat, trace] = run_algorithm(alg, problem, config);
  const Vec d_hat = idwt(x_hat, wavelet);

  SignalDemoReport report;
  report.n = n;
  report.m = m;
  report.k = k;
  report.kappa = kappa;
  report.sparse_coeffs = sparse_coeffs;
  report.snr_db = snr(d, d_hat);
  report.coeff_rel_error =
      x_true.norm() > 0.0 ? (x_hat - x_true).norm() / x_true.norm() : 0.0;
  report.iterations = static_cast<int>(trace.iterates.size());
  report.stop_reason = trace.stop_reason;
  return report;
}

TheoryReport make_theory_report(const TheoryReportRequest& request) {
  TheoryReport report;
  report.delta_star = find_delta_star();
  report.g = g_gamma(request.mean_function, request.k, request.gamma);
  report.delta_gamma = find_delta_gamma(report.g.g);

  std::optional<double> dk = request.delta_k;
  std::optional<double> d2k = request.delta_2k;
  std::optional<double> d3k = request.delta_3k;
  if (request.matrix_path) {
    const DenseMatrix A{load_matrix_auto(*request.matrix_path)};
    const int k = request.matrix_sparsity.value_or(request.k);
    dk = ric_bruteforce(A, k);
    d2k = ric_bruteforce(A, std::min<int>(2 * k, static_cast<int>(
                                                     std::min(A.rows(), A.cols()))));
    d3k = ric_bruteforce(A, std::min<int>(3 * k, static_cast<int>(
                                                     std::min(A.rows(), A.cols()))));
  }
  if (dk && d2k && d3k) {
    report.constants = constants_bundle(*dk, *d2k, *d3k, report.g.g, request.beta);
    report.pg_constants = pgrotp_constants(*dk, *d2k, *d3k);
  }
  return report;
}

}  // namespace dtam
