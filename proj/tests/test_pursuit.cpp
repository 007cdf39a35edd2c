#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dtam/experiment.hpp"
#include "dtam/ops.hpp"
#include "dtam/pursuit.hpp"
#include "dtam/rng.hpp"
#include "oracles.hpp"

using namespace dtam;

namespace {

AlgoConfig lse_config() {
  AlgoConfig cfg;  // gamma 0.1, beta 0.4, log_sum_exp
  return cfg;
}

AlgoConfig l2_config(double gamma, double beta) {
  AlgoConfig cfg;
  cfg.gamma = gamma;
  cfg.beta = beta;
  cfg.mean_function.family = MeanFamily::lp_norm;
  cfg.mean_function.l = 2.0;
  return cfg;
}

// k-sparse ground truth with distinct magnitudes on random positions.
Vec sparse_truth(SplitMix64& rng, int n, int k) {
  Vec x = Vec::Zero(n);
  std::vector<int> used;
  while (static_cast<int>(used.size()) < k) {
    const int i = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
    bool seen = false;
    for (int u : used) seen |= u == i;
    if (seen) continue;
    used.push_back(i);
    const double mag = 1.0 + static_cast<double>(used.size());
    x[i] = rng.next_unit() < 0.5 ? -mag : mag;
  }
  return x;
}

}  // namespace

TEST_CASE("dtam: zero measurements stop immediately with zero direction") {
  SplitMix64 rng(51);
  const DenseMatrix A = normalize_columns(DenseMatrix{oracles::randn_mat(rng, 6, 12)});
  const RecoveryProblem problem(A, Vec::Zero(6), 3);
  const auto [x, trace] = dtam::dtam(problem, lse_config());
  CHECK(x == Vec::Zero(12));
  CHECK(trace.stop_reason == StopReason::zero_direction);
  CHECK(trace.iterates.empty());
}

TEST_CASE("dtam: one-step recovery with orthonormal columns") {
  SplitMix64 rng(52);
  const int m = 16, n = 12, k = 4;
  const Mat q = oracles::random_orthonormal(rng, m, n);
  const Vec x_star = sparse_truth(rng, n, k);
  const RecoveryProblem problem(DenseMatrix{q}, q * x_star, k, x_star);

  // A'A = I makes the first direction equal x_star; with q forced to k the
  // first support is exact and one projection finishes the job.
  const auto [x, trace] = dtam::dtam(problem, l2_config(1.0, 0.4));
  CHECK((x - x_star).norm() / x_star.norm() <= 1e-3);
  CHECK(trace.iterates.size() == 1);

  // the default mean function also recovers, possibly in a few iterations
  const auto [xd, td] = dtam::dtam(problem, lse_config());
  CHECK((xd - x_star).norm() / x_star.norm() <= 1e-3);
}

TEST_CASE("dtam invariants hold along the trace") {
  SplitMix64 rng(53);
  for (int run = 0; run < 12; ++run) {
    const int n = 60, m = 24;
    const int k = 3 + static_cast<int>(rng.next_below(5));
    const RecoveryProblem problem = gen_instance(n, m, k, rng.next());
    AlgoConfig cfg = run % 2 == 0 ? lse_config() : l2_config(0.4, 0.0);
    if (run % 3 == 0) cfg.beta = 0.0;
    cfg.max_iters = 25;

    DtamDebug debug;
    const auto [x, trace] = dtam::dtam(problem, cfg, &debug);

    CHECK(support_of(x).size() <= k);
    const double grad_scale = std::max(
        1.0, (problem.A.mat().transpose() * problem.y).lpNorm<Eigen::Infinity>());
    const std::size_t iters = trace.iterates.size();
    REQUIRE(debug.v_sizes.size() == iters);
    const double g =
        g_gamma(cfg.mean_function, k, cfg.gamma).g;
    for (std::size_t p = 0; p < iters; ++p) {
      CHECK(trace.iterates[p].support.size() <= k);
      CHECK(debug.v_sizes[p] <= 2 * k);
      CHECK(debug.post_ls_grad_inf[p] <= 1e-8 * grad_scale);
      CHECK(debug.omega_q_norms[p] >= g * debug.omega_k_norms[p] - 1e-12);
      REQUIRE(trace.iterates[p].selected_q.has_value());
      CHECK(*trace.iterates[p].selected_q >= 1);
      CHECK(*trace.iterates[p].selected_q <= k);
      CHECK(trace.iterates[p].wall_time_s >= 0.0);
    }

    // memory recursion equals the explicit geometric sum
    for (std::size_t p = 0; p < debug.r_history.size(); ++p) {
      Vec explicit_sum = Vec::Zero(n);
      for (std::size_t j = 0; j <= p; ++j) {
        explicit_sum += std::pow(cfg.beta, static_cast<double>(p - j)) *
                        debug.r_hat_history[j];
      }
      const double scale = std::max(1.0, explicit_sum.norm());
      CHECK((debug.r_history[p] - explicit_sum).norm() <= 1e-12 * scale);
      if (cfg.beta == 0.0) {
        CHECK(debug.r_history[p] == debug.r_hat_history[p]);  // bitwise
      }
    }
  }
}

TEST_CASE("dtam is deterministic") {
  SplitMix64 rng(54);
  const RecoveryProblem problem = gen_instance(80, 30, 6, 99);
  const AlgoConfig cfg = lse_config();
  const auto [x1, t1] = dtam::dtam(problem, cfg);
  const auto [x2, t2] = dtam::dtam(problem, cfg);
  CHECK(x1 == x2);  // bitwise
  REQUIRE(t1.iterates.size() == t2.iterates.size());
  for (std::size_t i = 0; i < t1.iterates.size(); ++i) {
    CHECK(t1.iterates[i].support == t2.iterates[i].support);
    CHECK(t1.iterates[i].residual_norm == t2.iterates[i].residual_norm);
  }
  CHECK(t1.stop_reason == t2.stop_reason);
}

TEST_CASE("pgrotp: identity recovery and parameter validation") {
  const int n = 8;
  DenseMatrix A{Mat::Identity(n, n)};
  Vec y = Vec::Zero(n);
  y[2] = 3.0;
  y[5] = -1.5;
  const RecoveryProblem problem(A, y, 2);
  const auto [x, trace] = pgrotp(problem, AlgoConfig::defaults_for(Algorithm::pgrotp));
  CHECK((x - y).norm() <= 1e-12);
  CHECK(trace.iterates.size() == 1);

  AlgoConfig bad = AlgoConfig::defaults_for(Algorithm::pgrotp);
  bad.qbar = 1;  // below k
  CHECK_THROWS_AS(pgrotp(problem, bad), std::invalid_argument);

  // a wider partial gradient is allowed and still recovers easy instances
  AlgoConfig wide = AlgoConfig::defaults_for(Algorithm::pgrotp);
  wide.qbar = 4;
  const auto [xw, tw] = pgrotp(problem, wide);
  CHECK((xw - y).norm() <= 1e-10);
}

TEST_CASE("pgrotp coincides with dtam(beta=0, q=k) on near-perfect matrices") {
  SplitMix64 rng(55);
  for (int trial = 0; trial < 8; ++trial) {
    const int m = 20, n = 12, k = 4;
    const Mat q = oracles::random_orthonormal(rng, m, n);
    const Vec x_star = sparse_truth(rng, n, k);
    const RecoveryProblem problem(DenseMatrix{q}, q * x_star, k, x_star);

    // gamma=1 with the l2 mean and distinct magnitudes forces q=k, and
    // beta=0 removes the memory, mirroring the partial-gradient method.
    const auto [xd, td] = dtam::dtam(problem, l2_config(1.0, 0.0));
    const auto [xp, tp] = pgrotp(problem, AlgoConfig::defaults_for(Algorithm::pgrotp));

    CHECK((xd - xp).lpNorm<Eigen::Infinity>() <= 1e-12);
    REQUIRE(td.iterates.size() == tp.iterates.size());
    for (std::size_t i = 0; i < td.iterates.size(); ++i) {
      CHECK(td.iterates[i].support == tp.iterates[i].support);
    }
  }
}

TEST_CASE("omp: forced identity cases") {
  const int n = 6;
  DenseMatrix A{Mat::Identity(n, n)};
  Vec y = Vec::Zero(n);
  y[2] = 5.0;
  {
    const RecoveryProblem problem(A, y, 1);
    const auto [x, trace] = omp(problem, AlgoConfig::defaults_for(Algorithm::omp));
    CHECK(x == y);
    CHECK(trace.iterates.size() == 1);
    CHECK(trace.stop_reason == StopReason::max_iters);
  }
  {
    SplitMix64 rng(56);
    const Mat q = oracles::random_orthonormal(rng, 10, 6);
    Vec x_star = Vec::Zero(6);
    x_star[1] = 2.0;
    x_star[4] = -3.0;
    const RecoveryProblem problem(DenseMatrix{q}, q * x_star, 2);
    const auto [x, trace] = omp(problem, AlgoConfig::defaults_for(Algorithm::omp));
    CHECK(trace.iterates.size() == 2);
    CHECK((problem.y - q * x).norm() <= 1e-10);
  }
}

TEST_CASE("fixture: an instance where omp fails but dtam succeeds") {
  // Deterministic scan for a coherent instance separating the two methods;
  // informational only, but pins the behaviour under the frozen seeds.
  bool found = false;
  for (std::uint64_t seed = 0; seed < 100 && !found; ++seed) {
    const RecoveryProblem problem = gen_instance(80, 20, 6, seed);
    const auto [xo, to] = omp(problem, AlgoConfig::defaults_for(Algorithm::omp));
    const Vec& truth = *problem.ground_truth;
    const double omp_err = (xo - truth).norm() / truth.norm();
    if (omp_err <= 1e-3) continue;
    const auto [xd, td] = dtam::dtam(problem, lse_config());
    const double dtam_err = (xd - truth).norm() / truth.norm();
    if (dtam_err <= 1e-3) {
      found = true;
      MESSAGE("seed ", seed, ": omp rel err ", omp_err, ", dtam rel err ",
              dtam_err);
    }
  }
  CHECK(found);
}

TEST_CASE("sp: identity recovery and non-increasing residuals") {
  const int n = 7;
  DenseMatrix A{Mat::Identity(n, n)};
  Vec y = Vec::Zero(n);
  y[0] = 1.0;
  y[3] = -2.0;
  const RecoveryProblem problem(A, y, 2);
  const auto [x, trace] = sp(problem, AlgoConfig::defaults_for(Algorithm::sp));
  CHECK((x - y).norm() <= 1e-12);
  CHECK(trace.iterates.size() == 1);

  SplitMix64 rng(57);
  const RecoveryProblem hard = gen_instance(100, 25, 12, rng.next());
  const auto [xh, th] = sp(hard, AlgoConfig::defaults_for(Algorithm::sp));
  for (std::size_t i = 1; i < th.iterates.size(); ++i) {
    CHECK(th.iterates[i].residual_norm <= th.iterates[i - 1].residual_norm);
  }
  CHECK(support_of(xh).size() <= 12);
}

TEST_CASE("stomp: threshold gate and equal-magnitude stage") {
  const int n = 20, m = 16;
  SplitMix64 rng(58);
  {
    // gigantic threshold: nothing passes at stage 1
    const RecoveryProblem problem = gen_instance(n, m, 3, 7);
    AlgoConfig cfg = AlgoConfig::defaults_for(Algorithm::stomp);
    cfg.stomp_threshold = 1e6;
    const auto [x, trace] = stomp(problem, cfg);
    CHECK(x == Vec::Zero(n));
    CHECK(trace.stop_reason == StopReason::zero_direction);
    CHECK(trace.iterates.empty());
  }
  {
    // identity-like: equal magnitudes all pass in one stage (m > 6.25 k)
    DenseMatrix A{Mat::Identity(m, m)};
    Vec y = Vec::Zero(m);
    y[1] = y[6] = 1.0;
    const RecoveryProblem problem(A, y, 2);
    const auto [x, trace] = stomp(problem, AlgoConfig::defaults_for(Algorithm::stomp));
    CHECK((x - y).norm() <= 1e-12);
    REQUIRE(!trace.iterates.empty());
    CHECK(trace.iterates[0].support.size() == 2);
    CHECK(trace.stop_reason == StopReason::residual_tol);
  }
}

TEST_CASE("all algorithms return feasible points and succeed at low sparsity") {
  for (std::uint64_t trial = 0; trial < 5; ++trial) {
    const RecoveryProblem problem = gen_instance(400, 100, 10, 1000 + trial);
    const Vec& truth = *problem.ground_truth;
    for (Algorithm alg : {Algorithm::dtam, Algorithm::pgrotp, Algorithm::omp,
                          Algorithm::sp, Algorithm::stomp}) {
      AlgoConfig cfg = AlgoConfig::defaults_for(alg);
      const auto [x, trace] = run_algorithm(alg, problem, cfg);
      CHECK(support_of(x).size() <= problem.k);
      const double rel = (x - truth).norm() / truth.norm();
      INFO("algorithm ", to_string(alg), " trial ", trial, " rel ", rel);
      CHECK(rel <= 1e-3);
    }
  }
}

TEST_CASE("max_iters is respected") {
  SplitMix64 rng(59);
  const RecoveryProblem problem = gen_instance(60, 20, 15, rng.next());
  AlgoConfig cfg = lse_config();
  cfg.max_iters = 3;
  const auto [x, trace] = dtam::dtam(problem, cfg);
  CHECK(trace.iterates.size() <= 3);
}
