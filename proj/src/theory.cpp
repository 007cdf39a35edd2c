#include "dtam/theory.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "dtam/linalg.hpp"

namespace dtam {

namespace {

// C(n,k) with saturation beyond the enumeration guard.
double binomial_approx(int n, int k) {
  double v = 1.0;
  for (int i = 1; i <= k; ++i) {
    v *= static_cast<double>(n - k + i) / i;
    if (v > 1e12) return v;
  }
  return v;
}

double bisect_root(const std::function<double(double)>& f, double lo,
                   double hi) {
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double val = f(mid);
    if (std::abs(val) <= 1e-12 || hi - lo < 1e-16) return mid;
    if (val < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double ric_bruteforce(const DenseMatrix& A, int k) {
  const int m = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());
  if (k < 1 || k > std::min(m, n)) {
    throw std::invalid_argument("ric_bruteforce: need 1 <= k <= min(m,n)");
  }
  if (binomial_approx(n, k) > 1e6) {
    throw std::invalid_argument(
        "ric_bruteforce: C(n,k) exceeds 1e6; use a smaller instance");
  }

  std::vector<int> subset(static_cast<std::size_t>(k));
  std::iota(subset.begin(), subset.end(), 0);
  Mat cols(m, k);
  double delta = 0.0;
  while (true) {
    for (int j = 0; j < k; ++j) {
      cols.col(j) = A.mat().col(subset[static_cast<std::size_t>(j)]);
    }
    const Mat gram = cols.transpose() * cols;
    const std::vector<double> eig = symmetric_eigenvalues(gram);
    delta = std::max(delta, std::max(1.0 - eig.front(), eig.back() - 1.0));

    // next k-combination in lexicographic order
    int i = k - 1;
    while (i >= 0 && subset[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) break;
    ++subset[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) {
      subset[static_cast<std::size_t>(j)] = subset[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
  return delta;
}

double eval_G(double t, double g) {
  if (!(t >= 0.0 && t < 1.0)) {
    throw std::invalid_argument("eval_G: t must lie in [0,1)");
  }
  if (!(g > 0.0 && g <= 1.0)) {
    throw std::invalid_argument("eval_G: g must lie in (0,1]");
  }
  const double tail = std::sqrt(std::max(0.0, 1.0 - g * g));
  return (std::sqrt(2.0) * t + t * std::sqrt((5.0 + t) / (1.0 + t)) +
          tail * (1.0 + t)) /
             (1.0 - t) -
         1.0;
}

double find_delta_gamma(double g) {
  if (!(g > 0.0 && g <= 1.0)) {
    throw std::invalid_argument("find_delta_gamma: g must lie in (0,1]");
  }
  // G(0) = sqrt(1-g^2) - 1 < 0 and G -> +inf as t -> 1.
  return bisect_root([g](double t) { return eval_G(t, g); }, 0.0,
                     1.0 - 1e-12);
}

double eval_G_hat(double t) {
  if (!(t >= 0.0 && t < 1.0)) {
    throw std::invalid_argument("eval_G_hat: t must lie in [0,1)");
  }
  return (std::sqrt(2.0) * t / (1.0 - t)) * (1.0 + 1.0 / std::sqrt(1.0 + t)) -
         1.0;
}

double find_delta_star() {
  return bisect_root([](double t) { return eval_G_hat(t); }, 0.0,
                     1.0 - 1e-12);
}

TheoryConstants constants_bundle(double delta_k, double delta_2k,
                                 double delta_3k, double g, double beta) {
  if (!(0.0 <= delta_k && delta_k <= delta_2k && delta_2k <= delta_3k &&
        delta_3k < 1.0)) {
    throw std::invalid_argument(
        "constants_bundle: need 0 <= delta_k <= delta_2k <= delta_3k < 1");
  }
  if (!(g > 0.0 && g <= 1.0)) {
    throw std::invalid_argument("constants_bundle: g must lie in (0,1]");
  }
  if (!(beta >= 0.0 && beta < 1.0)) {
    throw std::invalid_argument("constants_bundle: beta must lie in [0,1)");
  }

  TheoryConstants tc;
  tc.delta_k = delta_k;
  tc.delta_2k = delta_2k;
  tc.delta_3k = delta_3k;
  tc.g = g;
  tc.beta = beta;

  const double tail = std::sqrt(std::max(0.0, 1.0 - g * g));
  tc.C1 = std::sqrt(2.0) * delta_3k + tail * (1.0 + delta_3k);
  tc.C2 = std::sqrt(1.0 + delta_2k) * (std::sqrt(2.0) + tail);
  tc.rho_tilde =
      (tc.C1 + delta_3k * std::sqrt((5.0 + delta_2k) / (1.0 + delta_2k))) /
      (1.0 - delta_2k);
  tc.beta_max =
      tc.rho_tilde > 0.0
          ? 2.0 * tc.rho_tilde /
                    (delta_2k + std::sqrt(delta_2k * delta_2k +
                                          4.0 * tc.rho_tilde * (1.0 - delta_2k))) -
                tc.rho_tilde
          : 0.0;
  tc.rho = tc.rho_tilde + beta +
           (beta > 0.0 ? beta / ((1.0 - delta_2k) * (tc.rho_tilde + beta))
                       : 0.0);
  tc.C_beta = ((tc.C2 + std::sqrt(5.0 + delta_2k)) / (1.0 - beta) +
               2.0 / std::sqrt(1.0 + delta_2k) + std::sqrt(1.0 + delta_k)) /
              (1.0 - delta_2k);
  tc.delta_gamma = find_delta_gamma(g);
  const bool beta_admissible =
      beta == 0.0 ? tc.rho_tilde < 1.0 : beta < tc.beta_max;
  tc.regime_ok = delta_3k < tc.delta_gamma && beta_admissible;
  return tc;
}

double error_bound(int p, double x0_err, double nu_norm,
                   const TheoryConstants& constants) {
  if (p < 0) throw std::invalid_argument("error_bound: p must be nonnegative");
  if (x0_err < 0.0 || nu_norm < 0.0) {
    throw std::invalid_argument("error_bound: norms must be nonnegative");
  }
  if (!constants.regime_ok) {
    throw std::invalid_argument(
        "error_bound: constants outside the guaranteed regime");
  }
  return std::pow(constants.rho, p) * x0_err +
         constants.C_beta / (1.0 - constants.rho) * nu_norm;
}

PgrotpConstants pgrotp_constants(double delta_k, double delta_2k,
                                 double delta_3k) {
  if (!(0.0 <= delta_k && delta_k <= delta_2k && delta_2k <= delta_3k &&
        delta_3k < 1.0)) {
    throw std::invalid_argument(
        "pgrotp_constants: need 0 <= delta_k <= delta_2k <= delta_3k < 1");
  }
  PgrotpConstants pc;
  pc.rho_hat = std::sqrt(2.0) * delta_3k / (1.0 - delta_2k) *
               (1.0 + std::sqrt(1.0 + delta_k)) / std::sqrt(1.0 + delta_2k);
  pc.C_hat = (std::sqrt(2.0) + 2.0 / std::sqrt(1.0 + delta_2k) +
              (std::sqrt(2.0) + 1.0) * std::sqrt(1.0 + delta_k)) /
             (1.0 - delta_2k);
  pc.delta_star = find_delta_star();
  pc.regime_ok = delta_3k < pc.delta_star;
  return pc;
}

}  // namespace dtam
