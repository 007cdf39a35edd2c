#ifndef DTAM_QP_HPP
#define DTAM_QP_HPP

#include <vector>

#include "dtam/linalg.hpp"
#include "dtam/types.hpp"

namespace dtam {

enum class SumMode { equality, at_most };

// The capped simplex {w : 0 <= w <= 1, sum w = k} (or <= k).
struct CappedSimplexSpec {
  int dimension = 0;
  int mass = 0;
  SumMode sum_mode = SumMode::equality;
};

// Euclidean projection onto the capped simplex. Equality mode solves
// sum_i clamp(v_i - tau, 0, 1) = k exactly by walking the sorted breakpoints
// {v_i, v_i - 1}; at_most mode clamps to the box and falls back to the
// equality solution when the clamped mass exceeds k.
Vec project_capped_simplex(const Vec& v, const CappedSimplexSpec& spec);

struct QpSolution {
  Vec w;                     // full-length n, supported on V
  double objective = 0.0;    // ||y - A(u o w)||_2^2 at return
  int iterations = 0;
  double kkt_residual = 0.0; // || w - P(w - grad) ||_inf
  bool converged = true;     // false when the iteration cap or a numerical
                             // stall ended the solve before the tolerance
};

// Minimizes ||y - A(u o w)||_2^2 over w supported on V with w_V in the
// capped simplex of mass k. Monotone accelerated projected gradient with
// step 1/L, L from 50 power iterations on the restricted Gram matrix;
// momentum restarts whenever the accelerated step would increase the
// objective. Stops at kkt_residual <= 1e-8 * (1 + ||initial gradient||_inf)
// or 10000 iterations. When objective_history is given, the per-iteration
// objective values (non-increasing) are appended to it.
QpSolution solve_w_subproblem(const DenseMatrix& A, const Vec& y, const Vec& u,
                              const SupportSet& V, int k, SumMode mode,
                              std::vector<double>* objective_history = nullptr);

}  // namespace dtam

#endif  // DTAM_QP_HPP
