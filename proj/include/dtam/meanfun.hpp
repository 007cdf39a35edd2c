#ifndef DTAM_MEANFUN_HPP
#define DTAM_MEANFUN_HPP

#include <cstdint>
#include <string>
#include <tuple>
#include <vector>

#include "dtam/linalg.hpp"
#include "dtam/types.hpp"

namespace dtam {

enum class MeanFamily { log_sum_exp, power, delta11, delta12, lp_norm };

std::string to_string(MeanFamily family);
MeanFamily mean_family_from_string(const std::string& name);

// A generalized mean function family. theta left empty means the all-ones
// weight vector of the sparsity level in play; sigma applies to the first
// three (smooth) families; l is the outer exponent (power: l > 1,
// delta: 1 < l <= 2) and doubles as the norm order for lp_norm (l > 1).
struct MeanFunctionSpec {
  MeanFamily family = MeanFamily::log_sum_exp;
  std::vector<double> theta;
  double sigma = 1.0;
  double l = 2.0;

  // Checks parameter ranges and theta length against k; throws on violation.
  void validate(int k) const;
  // Copy with theta filled in as ones(k) when empty.
  MeanFunctionSpec resolved(int k) const;
};

// The raw mean function Gamma_theta(z); z must lie in the family's domain.
double eval_gamma(const MeanFunctionSpec& spec, const Vec& z);

// f(z) = Gamma_theta(z) - Gamma_theta(0); f(0) = 0 by construction.
double eval_f(const MeanFunctionSpec& spec, const Vec& z);

// Analytic gradient of f at the origin; strictly positive entrywise.
// Errors for lp_norm, whose gradient at 0 is undefined.
Vec grad_f_at_zero(const MeanFunctionSpec& spec, int k);

// Upper estimate of max_{z in [0,1]^k} lambda_max(hessian f(z)): corner
// evaluations (k <= 10) plus `samples` seeded compass searches, times a 1.05
// safety factor. A larger estimate only shrinks g(gamma), which stays valid.
// Errors for lp_norm (hessian discontinuous at 0).
double lambda_star(const MeanFunctionSpec& spec, int k, int samples = 64,
                   std::uint64_t seed = 0x5EEDBA5EULL);

struct GGammaBundle {
  double c = 0.0;          // min_i df/dz_i(0); for lp_norm the lower
                           // norm-equivalence constant c1
  double grad_norm = 0.0;  // ||grad f(0)||_2; for lp_norm the upper constant c2
  double lambda_star = 0.0;
  double g = 0.0;          // in (0,1]
};

// g(gamma) = 2*gamma*c / (sqrt(||grad f(0)||^2 + 2*gamma*c*lambda*) +
// ||grad f(0)||). For lp_norm with l = 2 this reduces to g = gamma exactly;
// other l use the tight lp/l2 norm-equivalence constants.
GGammaBundle g_gamma(const MeanFunctionSpec& spec, int k, double gamma,
                     int lambda_samples = 64);

// The dynamic selection rule: the smallest i in 1..k with
//   f(|r_(i,k)| / ||r_(k,k)||_2) >= gamma * f(|r_(k,k)| / ||r_(k,k)||_2),
// where r_(i,k) holds the i largest magnitudes of r in decreasing order,
// padded with zeros to length k. Always satisfied at i = k. Returns
// (q, Omega_q, Omega_k), the prefixes of the magnitude order.
// Throws std::domain_error when the top-k of r is entirely zero.
std::tuple<int, SupportSet, SupportSet> select_q(const Vec& r, int k,
                                                 double gamma,
                                                 const MeanFunctionSpec& spec);

}  // namespace dtam

#endif  // DTAM_MEANFUN_HPP
