#ifndef DTAM_EXPERIMENT_HPP
#define DTAM_EXPERIMENT_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dtam/config.hpp"
#include "dtam/theory.hpp"
#include "dtam/types.hpp"
#include "dtam/wavelet.hpp"

namespace dtam {

// Fully seed-determined synthetic instance: standard-Gaussian entries,
// unit-normalized columns, k uniformly placed standard-Gaussian nonzeros,
// exact measurements y = A x*. The draw order (column-major matrix fill,
// then a partial Fisher-Yates for positions, then the nonzero values) is
// part of the reproducibility contract.
RecoveryProblem gen_instance(int n, int m, int k, std::uint64_t seed);

struct ExperimentConfig {
  int n = 400;
  int m = 80;
  std::vector<int> k_grid;            // empty: 5,10,...,75
  int trials = 50;
  std::vector<Algorithm> algorithms;  // empty: dtam, pgrotp, omp, sp
  std::uint64_t base_seed = 1;
  AlgoConfig algo;                    // gamma/beta/mean function shared;
                                      // per-algorithm max_iters applied
  double noise_level = 0.0;           // relative ||nu|| / ||A x*||; > 0
                                      // switches to the rel-change stop rule
  bool record_timing = true;          // false writes time_ms as 0 so that two
                                      // runs produce byte-identical CSV
  int threads = 0;                    // 0: hardware concurrency
  std::string output_path = "phase_transition.csv";  // trial rows CSV; the
                                      // aggregate file derives from it

  void validate() const;
  std::vector<int> effective_k_grid() const;
  std::vector<Algorithm> effective_algorithms() const;
};

struct TrialResult {
  Algorithm algorithm;
  int k = 0;
  int trial = 0;
  std::uint64_t seed = 0;
  std::optional<bool> success;  // empty in noisy mode
  double rel_error = 0.0;
  int iterations = 0;
  double time_ms = 0.0;
};

struct CellAggregate {
  Algorithm algorithm;
  int k = 0;
  int trials = 0;
  double success_freq = 0.0;  // NaN in noisy mode
  double mean_time_ms = 0.0;
};

struct PhaseTransitionResult {
  std::vector<TrialResult> rows;        // ordered by (algorithm, k, trial)
  std::vector<CellAggregate> aggregates;
};

// Runs trials concurrently; per-trial seeds are
// seed_mix(base_seed, {algorithm_id, k, trial}), so any cell can be
// reproduced in isolation and the output is schedule-independent.
PhaseTransitionResult run_phase_transition(const ExperimentConfig& config);

// rows schema:      algorithm,k,trial,seed,success,rel_error,iterations,time_ms
// aggregate schema: algorithm,k,trials,success_freq,mean_time_ms
void write_rows_csv(const PhaseTransitionResult& result, const std::string& path);
void write_aggregate_csv(const PhaseTransitionResult& result, const std::string& path);

struct SignalDemoReport {
  int n = 0;
  int m = 0;
  int k = 0;
  double kappa = 0.0;
  bool sparse_coeffs = false;
  double snr_db = 0.0;       // +inf marks exact reconstruction
  double coeff_rel_error = 0.0;
  int iterations = 0;
  StopReason stop_reason = StopReason::max_iters;
};

// 1-D compressed-sensing demo: a fixed piecewise-smooth synthetic test
// signal d (the seed only drives the measurement matrix) is measured as
// y = B d with a normalized Gaussian B, m = ceil(kappa*n), and the wavelet
// coefficients are recovered from A = B Phi^T with sparsity k = ceil(0.3 m).
// With sparse_coeffs the signal is replaced by its own k-term wavelet
// approximation, making exact recovery possible.
SignalDemoReport signal_demo(int n, double kappa, const WaveletSpec& wavelet,
                             Algorithm alg, std::uint64_t seed,
                             bool sparse_coeffs = false,
                             const AlgoConfig* base_config = nullptr);

// The demo's synthetic test signal (audio stand-in), length n.
Vec demo_signal(int n);

struct TheoryReportRequest {
  double gamma = 0.1;
  double beta = 0.4;
  MeanFunctionSpec mean_function{};
  int k = 10;                          // resolves theta and lp constants
  std::optional<double> delta_k;       // either all three deltas...
  std::optional<double> delta_2k;
  std::optional<double> delta_3k;
  std::optional<std::string> matrix_path;  // ...or a matrix to brute-force
  std::optional<int> matrix_sparsity;      // k used for the matrix RICs
};

struct TheoryReport {
  double delta_star = 0.0;
  GGammaBundle g;
  double delta_gamma = 0.0;
  std::optional<TheoryConstants> constants;     // when deltas available
  std::optional<PgrotpConstants> pg_constants;
};

TheoryReport make_theory_report(const TheoryReportRequest& request);

}  // namespace dtam

#endif  // DTAM_EXPERIMENT_HPP
