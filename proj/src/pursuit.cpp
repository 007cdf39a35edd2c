#include "dtam/pursuit.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "dtam/ops.hpp"
#include "dtam/qp.hpp"

namespace dtam {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double effective_residual_tol(const AlgoConfig& config, const Vec& y) {
  return config.residual_tol.value_or(1e-10 * y.norm());
}

// Relative-change rule ||x_new - x_old|| / ||x_new|| <= tol; inactive when
// tol is zero or the new iterate vanishes.
bool rel_change_hit(const Vec& x_new, const Vec& x_old, double tol) {
  if (tol <= 0.0) return false;
  const double nrm = x_new.norm();
  if (nrm == 0.0) return false;
  return (x_new - x_old).norm() / nrm <= tol;
}

}  // namespace

std::pair<Vec, PursuitTrace> dtam(const RecoveryProblem& problem,
                                  const AlgoConfig& config, DtamDebug* debug) {
  config.validate();
  const DenseMatrix& A = problem.A;
  const Vec& y = problem.y;
  const int k = problem.k;
  const double resid_tol = effective_residual_tol(config, y);
  const double y_norm = y.norm();
  const MeanFunctionSpec spec = config.mean_function.resolved(k);

  PursuitTrace trace;
  Vec x = Vec::Zero(A.cols());
  Vec r_acc = Vec::Zero(A.cols());

  for (int p = 0;; ++p) {
    const auto t0 = Clock::now();
    const Vec res = y - A.mat() * x;
    if (res.norm() <= resid_tol && y_norm > 0.0) {
      trace.stop_reason = StopReason::residual_tol;
      break;
    }
    if (p == config.max_iters) {
      trace.stop_reason = StopReason::max_iters;
      break;
    }

    // S1: memory direction and dynamic index selection.
    const Vec r_hat = A.mat().transpose() * res;
    r_acc = r_hat + config.beta * r_acc;
    if (hard_threshold(r_acc, k).norm() == 0.0) {
      trace.stop_reason = StopReason::zero_direction;
      break;
    }
    const auto [q, omega_q, omega_k] = select_q(r_acc, k, config.gamma, spec);
    const Vec u = x + restrict_to_support(r_acc, omega_q);

    // S2: merge supports; rank through the weight subproblem when too large.
    const SupportSet V = support_of(x).union_with(omega_q);
    if (V.size() > 2 * k) {
      throw std::logic_error("dtam: |V| exceeded 2k");
    }
    SupportSet S;
    if (V.size() <= k) {
      S = V;
    } else {
      const QpSolution qp =
          solve_w_subproblem(A, y, u, V, k, SumMode::equality);
      S = top_k_indices(u.cwiseProduct(qp.w), k);
    }

    // S3: orthogonal projection onto the chosen support.
    const Vec x_new = least_squares_on_support(A, y, S);

    if (debug) {
      debug->r_hat_history.push_back(r_hat);
      debug->r_history.push_back(r_acc);
      debug->x_history.push_back(x_new);
      debug->v_sizes.push_back(V.size());
      debug->omega_q_norms.push_back(restrict_to_support(r_acc, omega_q).norm());
      debug->omega_k_norms.push_back(restrict_to_support(r_acc, omega_k).norm());
      const Vec g_new = A.mat().transpose() * (y - A.mat() * x_new);
      debug->post_ls_grad_inf.push_back(
          restrict_to_support(g_new, S).lpNorm<Eigen::Infinity>());
    }

    trace.iterates.push_back({p, S, (y - A.mat() * x_new).norm(), q,
                              seconds_since(t0)});
    const bool stop = rel_change_hit(x_new, x, config.rel_change_tol);
    x = x_new;
    if (stop) {
      trace.stop_reason = StopReason::relative_change_tol;
      break;
    }
  }
  trace.final_x = x;
  return {x, std::move(trace)};
}

std::pair<Vec, PursuitTrace> pgrotp(const RecoveryProblem& problem,
                                    const AlgoConfig& config) {
  config.validate();
  const DenseMatrix& A = problem.A;
  const Vec& y = problem.y;
  const int k = problem.k;
  const int n = static_cast<int>(A.cols());
  const int qbar = config.qbar.value_or(k);
  if (qbar < k || qbar > n) {
    throw std::invalid_argument("pgrotp: qbar must satisfy k <= qbar <= n");
  }
  const double resid_tol = effective_residual_tol(config, y);
  const double y_norm = y.norm();

  PursuitTrace trace;
  Vec x = Vec::Zero(n);

  for (int p = 0;; ++p) {
    const auto t0 = Clock::now();
    const Vec res = y - A.mat() * x;
    if (res.norm() <= resid_tol && y_norm > 0.0) {
      trace.stop_reason = StopReason::residual_tol;
      break;
    }
    if (p == config.max_iters) {
      trace.stop_reason = StopReason::max_iters;
      break;
    }

    const Vec r_hat = A.mat().transpose() * res;
    const Vec step = hard_threshold(r_hat, qbar);
    if (step.norm() == 0.0) {
      trace.stop_reason = StopReason::zero_direction;
      break;
    }
    const Vec u = x + step;
    const SupportSet U = support_of(u);
    if (U.empty()) {
      trace.stop_reason = StopReason::zero_direction;
      break;
    }
    // The full-dimensional weight problem restricted to supp(u): off-support
    // coordinates never change the objective and can absorb leftover mass as
    // long as n - |supp(u)| >= k.
    if (n - U.size() < k) {
      throw std::runtime_error("pgrotp: n - |supp(u)| < k, cannot restrict");
    }
    const QpSolution qp = solve_w_subproblem(A, y, u, U, k, SumMode::at_most);
    const SupportSet S = top_k_indices(u.cwiseProduct(qp.w), k);
    const Vec x_new = least_squares_on_support(A, y, S);

    trace.iterates.push_back({p, S, (y - A.mat() * x_new).norm(), std::nullopt,
                              seconds_since(t0)});
    const bool stop = rel_change_hit(x_new, x, config.rel_change_tol);
    x = x_new;
    if (stop) {
      trace.stop_reason = StopReason::relative_change_tol;
      break;
    }
  }
  trace.final_x = x;
  return {x, std::move(trace)};
}

std::pair<Vec, PursuitTrace> omp(const RecoveryProblem& problem,
                                 const AlgoConfig& config) {
  config.validate();
  const DenseMatrix& A = problem.A;
  const Vec& y = problem.y;
  const int k = problem.k;

  PursuitTrace trace;
  Vec x = Vec::Zero(A.cols());
  std::vector<int> picked;
  picked.reserve(static_cast<std::size_t>(k));

  for (int p = 0; p < k; ++p) {
    const auto t0 = Clock::now();
    const Vec g = A.mat().transpose() * (y - A.mat() * x);
    int best = -1;
    double best_mag = -1.0;
    for (Eigen::Index i = 0; i < g.size(); ++i) {
      const bool taken =
          std::find(picked.begin(), picked.end(), static_cast<int>(i)) !=
          picked.end();
      if (taken) continue;
      const double mag = std::abs(g[i]);
      if (mag > best_mag) {
        best_mag = mag;
        best = static_cast<int>(i);
      }
    }
    picked.push_back(best);
    const SupportSet S{std::vector<int>(picked)};
    x = least_squares_on_support(A, y, S);
    trace.iterates.push_back(
        {p, S, (y - A.mat() * x).norm(), std::nullopt, seconds_since(t0)});
  }
  trace.stop_reason = StopReason::max_iters;  // ran its k iterations
  trace.final_x = x;
  return {x, std::move(trace)};
}

std::pair<Vec, PursuitTrace> sp(const RecoveryProblem& problem,
                                const AlgoConfig& config) {
  config.validate();
  const DenseMatrix& A = problem.A;
  const Vec& y = problem.y;
  const int k = problem.k;
  const double resid_tol = effective_residual_tol(config, y);
  const double y_norm = y.norm();

  PursuitTrace trace;
  Vec x = Vec::Zero(A.cols());
  SupportSet S;
  double res_norm = y.norm();

  for (int p = 0;; ++p) {
    const auto t0 = Clock::now();
    const Vec res = y - A.mat() * x;
    res_norm = res.norm();
    if (res_norm <= resid_tol && y_norm > 0.0) {
      trace.stop_reason = StopReason::residual_tol;
      break;
    }
    if (p == config.max_iters) {
      trace.stop_reason = StopReason::max_iters;
      break;
    }
    const Vec g = A.mat().transpose() * res;
    if (hard_threshold(g, k).norm() == 0.0) {
      trace.stop_reason = StopReason::zero_direction;
      break;
    }
    const SupportSet candidates = S.union_with(top_k_indices(g, k));
    const Vec z = least_squares_on_support(A, y, candidates);
    const SupportSet S_new = top_k_indices(z, k);
    const Vec x_new = least_squares_on_support(A, y, S_new);
    const double res_new = (y - A.mat() * x_new).norm();
    if (res_new >= res_norm) {
      // Residual stopped decreasing: keep the previous iterate.
      trace.stop_reason = StopReason::relative_change_tol;
      break;
    }
    S = S_new;
    x = x_new;
    res_norm = res_new;
    trace.iterates.push_back(
        {p, S, res_norm, std::nullopt, seconds_since(t0)});
  }
  trace.final_x = x;
  return {x, std::move(trace)};
}

std::pair<Vec, PursuitTrace> stomp(const RecoveryProblem& problem,
                                   const AlgoConfig& config) {
  config.validate();
  const DenseMatrix& A = problem.A;
  const Vec& y = problem.y;
  const int k = problem.k;
  const double resid_tol = effective_residual_tol(config, y);
  const double y_norm = y.norm();
  const double sqrt_m = std::sqrt(static_cast<double>(A.rows()));
  const int max_stages = std::min(config.max_iters, 50);

  PursuitTrace trace;
  Vec x = Vec::Zero(A.cols());
  SupportSet S;

  for (int stage = 0;; ++stage) {
    const auto t0 = Clock::now();
    const Vec res = y - A.mat() * x;
    const double res_norm = res.norm();
    if (res_norm <= resid_tol && y_norm > 0.0) {
      trace.stop_reason = StopReason::residual_tol;
      break;
    }
    if (stage == max_stages) {
      trace.stop_reason = StopReason::max_iters;
      break;
    }
    const double threshold = config.stomp_threshold * res_norm / sqrt_m;
    const Vec g = A.mat().transpose() * res;

    // Candidates above the stage threshold, strongest first; the merged set
    // is kept solvable (at most min(2k, m) columns).
    const int cap = std::min(2 * k, static_cast<int>(A.rows()));
    std::vector<int> merged = S.indices();
    for (int i : magnitude_argsort(g)) {
      if (static_cast<int>(merged.size()) >= cap) break;
      if (S.contains(i)) continue;
      if (std::abs(g[i]) > threshold) merged.push_back(i);
    }
    if (static_cast<int>(merged.size()) == S.size()) {
      // No index passes: no usable direction remains under this rule.
      trace.stop_reason = StopReason::zero_direction;
      break;
    }
    const SupportSet candidates{std::move(merged)};
    SupportSet S_new;
    if (candidates.size() <= k) {
      S_new = candidates;
      x = least_squares_on_support(A, y, S_new);
    } else {
      // Cap the support at k by keeping the largest solution magnitudes.
      const Vec z = least_squares_on_support(A, y, candidates);
      S_new = top_k_indices(z, k);
      x = least_squares_on_support(A, y, S_new);
    }
    if (S_new == S) {
      // The stage reproduced the same support; further stages cannot move.
      trace.stop_reason = StopReason::zero_direction;
      break;
    }
    S = S_new;
    trace.iterates.push_back(
        {stage, S, (y - A.mat() * x).norm(), std::nullopt, seconds_since(t0)});
  }
  trace.final_x = x;
  return {x, std::move(trace)};
}

std::pair<Vec, PursuitTrace> run_algorithm(Algorithm alg,
                                           const RecoveryProblem& problem,
                                           const AlgoConfig& config) {
  switch (alg) {
    case Algorithm::dtam: return dtam(problem, config);
    case Algorithm::pgrotp: return pgrotp(problem, config);
    case Algorithm::omp: return omp(problem, config);
    case Algorithm::sp: return sp(problem, config);
    case Algorithm::stomp: return stomp(problem, config);
  }
  throw std::logic_error("run_algorithm: unknown algorithm");
}

}  // namespace dtam
