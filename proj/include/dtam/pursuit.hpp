#ifndef DTAM_PURSUIT_HPP
#define DTAM_PURSUIT_HPP

#include <utility>
#include <vector>

#include "dtam/config.hpp"
#include "dtam/types.hpp"

namespace dtam {

// Per-iteration internals captured for invariant checking; pass nullptr in
// production runs.
struct DtamDebug {
  std::vector<Vec> r_hat_history;          // negative gradients \hat r^p
  std::vector<Vec> r_history;              // memory directions r^p
  std::vector<Vec> x_history;              // iterates x^{p+1}
  std::vector<int> v_sizes;                // |V^p|
  std::vector<double> omega_q_norms;       // ||(r^p)_{Omega_q}||_2
  std::vector<double> omega_k_norms;       // ||(r^p)_{Omega_k}||_2
  std::vector<double> post_ls_grad_inf;    // ||(A^T(y-Ax^{p+1}))_{S^{p+1}}||_inf
};

// Dynamic thresholding with memory. Per iteration: accumulate the
// beta-weighted gradient direction, pick q by the mean-function rule, move
// along the top-q of the direction, rank the merged support through the
// capped-simplex subproblem when it exceeds k, and re-fit by least squares.
std::pair<Vec, PursuitTrace> dtam(const RecoveryProblem& problem,
                                  const AlgoConfig& config,
                                  DtamDebug* debug = nullptr);

// Partial-gradient relaxed optimal k-thresholding: fixed top-qbar gradient
// step, weight subproblem over supp(u), keep the top-k of u o w.
std::pair<Vec, PursuitTrace> pgrotp(const RecoveryProblem& problem,
                                    const AlgoConfig& config);

// Orthogonal matching pursuit; runs exactly k iterations.
std::pair<Vec, PursuitTrace> omp(const RecoveryProblem& problem,
                                 const AlgoConfig& config);

// Subspace pursuit; stops once the residual no longer decreases.
std::pair<Vec, PursuitTrace> sp(const RecoveryProblem& problem,
                                const AlgoConfig& config);

// Stagewise OMP with a fixed threshold rule: indices whose correlation
// exceeds stomp_threshold * ||res||_2 / sqrt(m) join the candidate set,
// which is truncated back to the k largest solution magnitudes; at most
// 50 stages. Stops with zero_direction when no index passes.
std::pair<Vec, PursuitTrace> stomp(const RecoveryProblem& problem,
                                   const AlgoConfig& config);

std::pair<Vec, PursuitTrace> run_algorithm(Algorithm alg,
                                           const RecoveryProblem& problem,
                                           const AlgoConfig& config);

}  // namespace dtam

#endif  // DTAM_PURSUIT_HPP
