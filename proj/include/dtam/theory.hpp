#ifndef DTAM_THEORY_HPP
#define DTAM_THEORY_HPP

#include <utility>

#include "dtam/types.hpp"

namespace dtam {

// k-th order restricted isometry constant by exhaustive enumeration of the
// C(n,k) column subsets (guarded at 1e6 subsets): the max over subsets of
// max(1 - lambda_min, lambda_max - 1) of the k-by-k Gram matrices.
double ric_bruteforce(const DenseMatrix& A, int k);

// G(t) = [sqrt(2) t + t sqrt((5+t)/(1+t)) + sqrt(1-g^2) (1+t)] / (1-t) - 1,
// strictly increasing on [0,1) with a unique root delta(gamma).
double eval_G(double t, double g);

// Root of G by bisection to |G(delta)| <= 1e-12.
double find_delta_gamma(double g);

// Ghat(t) = (sqrt(2) t / (1-t)) (1 + 1/sqrt(1+t)) - 1 and its root
// delta_star (about 0.272), the convergence threshold of the partial-gradient
// variant with qbar = k.
double eval_G_hat(double t);
double find_delta_star();

struct TheoryConstants {
  double delta_k = 0.0;
  double delta_2k = 0.0;
  double delta_3k = 0.0;
  double g = 1.0;
  double C1 = 0.0;
  double C2 = 0.0;
  double rho_tilde = 0.0;
  double rho = 0.0;
  double C_beta = 0.0;
  double beta = 0.0;
  double beta_max = 0.0;   // upper end of the admissible beta range
  double delta_gamma = 0.0;
  bool regime_ok = false;  // delta_3k < delta(gamma) and beta admissible
};

// Evaluates all error-bound constants:
//   C1 = sqrt(2) d3k + sqrt(1-g^2) (1+d3k)
//   C2 = sqrt(1+d2k) (sqrt(2) + sqrt(1-g^2))
//   rho_tilde = (C1 + d3k sqrt((5+d2k)/(1+d2k))) / (1-d2k)
//   rho = rho_tilde + beta + beta / ((1-d2k)(rho_tilde+beta))
//   C_beta = [(C2 + sqrt(5+d2k))/(1-beta) + 2/sqrt(1+d2k) + sqrt(1+dk)] / (1-d2k)
//   beta_max = 2 rho_tilde / (d2k + sqrt(d2k^2 + 4 rho_tilde (1-d2k))) - rho_tilde
// regime_ok holds when d3k < delta(gamma) and beta < beta_max (beta = 0 is
// admissible whenever rho_tilde < 1).
TheoryConstants constants_bundle(double delta_k, double delta_2k,
                                 double delta_3k, double g, double beta);

// rho^p * x0_err + C_beta / (1-rho) * nu_norm; requires regime_ok.
double error_bound(int p, double x0_err, double nu_norm,
                   const TheoryConstants& constants);

struct PgrotpConstants {
  double rho_hat = 0.0;
  double C_hat = 0.0;
  double delta_star = 0.0;
  bool regime_ok = false;  // delta_3k < delta_star
};

// rho_hat = sqrt(2) d3k (1 + sqrt(1+dk)) / ((1-d2k) sqrt(1+d2k)),
// C_hat = (sqrt(2) + 2/sqrt(1+d2k) + (sqrt(2)+1) sqrt(1+dk)) / (1-d2k).
// Constants are returned even outside the regime, flagged via regime_ok.
PgrotpConstants pgrotp_constants(double delta_k, double delta_2k,
                                 double delta_3k);

}  // namespace dtam

#endif  // DTAM_THEORY_HPP
