#include "dtam/meanfun.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dtam/rng.hpp"

namespace dtam {

std::string to_string(MeanFamily family) {
  switch (family) {
    case MeanFamily::log_sum_exp: return "log_sum_exp";
    case MeanFamily::power: return "power";
    case MeanFamily::delta11: return "delta11";
    case MeanFamily::delta12: return "delta12";
    case MeanFamily::lp_norm: return "lp_norm";
  }
  return "?";
}

MeanFamily mean_family_from_string(const std::string& name) {
  if (name == "log_sum_exp" || name == "lse") return MeanFamily::log_sum_exp;
  if (name == "power") return MeanFamily::power;
  if (name == "delta11") return MeanFamily::delta11;
  if (name == "delta12") return MeanFamily::delta12;
  if (name == "lp_norm" || name == "lp") return MeanFamily::lp_norm;
  throw std::invalid_argument("unknown mean function family: " + name);
}

void MeanFunctionSpec::validate(int k) const {
  if (k < 1) throw std::invalid_argument("mean function: k must be positive");
  if (!theta.empty()) {
    if (static_cast<int>(theta.size()) != k) {
      throw std::invalid_argument("mean function: theta length != k");
    }
    for (double t : theta) {
      if (!(t > 0.0)) {
        throw std::invalid_argument("mean function: theta must be positive");
      }
    }
  }
  switch (family) {
    case MeanFamily::log_sum_exp:
    case MeanFamily::power:
    case MeanFamily::delta11:
    case MeanFamily::delta12:
      if (!(sigma > 0.0)) {
        throw std::invalid_argument("mean function: sigma must be positive");
      }
      break;
    case MeanFamily::lp_norm:
      break;
  }
  if (family == MeanFamily::power && !(l > 1.0)) {
    throw std::invalid_argument("power family requires l > 1");
  }
  if ((family == MeanFamily::delta11 || family == MeanFamily::delta12) &&
      !(l > 1.0 && l <= 2.0)) {
    throw std::invalid_argument("delta families require 1 < l <= 2");
  }
  if (family == MeanFamily::lp_norm && !(l > 1.0)) {
    throw std::invalid_argument("lp_norm requires l > 1");
  }
}

MeanFunctionSpec MeanFunctionSpec::resolved(int k) const {
  validate(k);
  MeanFunctionSpec out = *this;
  if (out.theta.empty()) out.theta.assign(static_cast<std::size_t>(k), 1.0);
  return out;
}

namespace {

// Delta_{1,1}(t) = t^2/2 - t + ln(t+1) and its derivatives, t > 0.
double d11(double t) { return 0.5 * t * t - t + std::log1p(t); }
double d11p(double t) { return t * t / (t + 1.0); }
double d11pp(double t) { return 1.0 - 1.0 / ((t + 1.0) * (t + 1.0)); }

// Delta_{1,2}(t) = [(t+1)^2 - (t+1)^{-1} - 3t] / 2 and derivatives, t > 0.
double d12(double t) {
  const double tp = t + 1.0;
  return 0.5 * (tp * tp - 1.0 / tp - 3.0 * t);
}
double d12p(double t) {
  const double tp = t + 1.0;
  return 0.5 * (2.0 * tp + 1.0 / (tp * tp) - 3.0);
}
double d12pp(double t) {
  const double tp = t + 1.0;
  return 1.0 - 1.0 / (tp * tp * tp);
}

void check_domain(const MeanFunctionSpec& spec, const Vec& z) {
  if (!z.allFinite()) throw std::invalid_argument("mean function: z not finite");
  if (spec.family == MeanFamily::power || spec.family == MeanFamily::delta11 ||
      spec.family == MeanFamily::delta12) {
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      if (!(z[i] > -spec.sigma)) {
        throw std::invalid_argument(
            "mean function: z outside the domain (-sigma, inf)");
      }
    }
  }
}

double eval_gamma_resolved(const MeanFunctionSpec& s, const Vec& z) {
  const Eigen::Index k = z.size();
  switch (s.family) {
    case MeanFamily::log_sum_exp: {
      // sigma * log(sum theta_i exp(z_i/sigma)), stabilised by the max.
      double zmax = z.maxCoeff();
      double acc = 0.0;
      for (Eigen::Index i = 0; i < k; ++i) {
        acc += s.theta[static_cast<std::size_t>(i)] *
               std::exp((z[i] - zmax) / s.sigma);
      }
      return zmax + s.sigma * std::log(acc);
    }
    case MeanFamily::power: {
      double acc = 0.0;
      for (Eigen::Index i = 0; i < k; ++i) {
        acc += s.theta[static_cast<std::size_t>(i)] *
               std::pow(z[i] + s.sigma, s.l);
      }
      return std::pow(acc, 1.0 / s.l) - s.sigma;
    }
    case MeanFamily::delta11:
    case MeanFamily::delta12: {
      const bool first = s.family == MeanFamily::delta11;
      double acc = 0.0;
      for (Eigen::Index i = 0; i < k; ++i) {
        const double t = z[i] + s.sigma;
        acc += s.theta[static_cast<std::size_t>(i)] * (first ? d11(t) : d12(t));
      }
      return std::pow(acc, 1.0 / s.l) - s.sigma;
    }
    case MeanFamily::lp_norm: {
      double acc = 0.0;
      for (Eigen::Index i = 0; i < k; ++i) {
        acc += std::pow(std::abs(z[i]), s.l);
      }
      return std::pow(acc, 1.0 / s.l);
    }
  }
  throw std::logic_error("unreachable");
}

Mat hessian_f(const MeanFunctionSpec& s, const Vec& z) {
  const Eigen::Index k = z.size();
  Mat H = Mat::Zero(k, k);
  switch (s.family) {
    case MeanFamily::log_sum_exp: {
      const double zmax = z.maxCoeff();
      Vec w(k);
      for (Eigen::Index i = 0; i < k; ++i) {
        w[i] = s.theta[static_cast<std::size_t>(i)] *
               std::exp((z[i] - zmax) / s.sigma);
      }
      const Vec p = w / w.sum();
      H = (Mat(p.asDiagonal()) - p * p.transpose()) / s.sigma;
      return H;
    }
    case MeanFamily::power: {
      double t_acc = 0.0;
      Vec a(k);  // theta_i (z_i + sigma)^{l-1}
      Vec b(k);  // theta_i (z_i + sigma)^{l-2}
      for (Eigen::Index i = 0; i < k; ++i) {
        const double base = z[i] + s.sigma;
        const double th = s.theta[static_cast<std::size_t>(i)];
        t_acc += th * std::pow(base, s.l);
        a[i] = th * std::pow(base, s.l - 1.0);
        b[i] = th * std::pow(base, s.l - 2.0);
      }
      const double t1 = std::pow(t_acc, 1.0 / s.l - 1.0);
      const double t2 = std::pow(t_acc, 1.0 / s.l - 2.0);
      H = (s.l - 1.0) *
          (Mat(b.asDiagonal()) * t1 - t2 * (a * a.transpose()));
      return H;
    }
    case MeanFamily::delta11:
    case MeanFamily::delta12: {
      const bool first = s.family == MeanFamily::delta11;
      double t_acc = 0.0;
      Vec dp(k), dpp(k);
      for (Eigen::Index i = 0; i < k; ++i) {
        const double t = z[i] + s.sigma;
        const double th = s.theta[static_cast<std::size_t>(i)];
        t_acc += th * (first ? d11(t) : d12(t));
        dp[i] = th * (first ? d11p(t) : d12p(t));
        dpp[i] = th * (first ? d11pp(t) : d12pp(t));
      }
      const double inv_l = 1.0 / s.l;
      const double t1 = std::pow(t_acc, inv_l - 1.0);
      const double t2 = std::pow(t_acc, inv_l - 2.0);
      H = inv_l * (Mat(dpp.asDiagonal()) * t1 +
                   (inv_l - 1.0) * t2 * (dp * dp.transpose()));
      return H;
    }
    case MeanFamily::lp_norm:
      throw std::invalid_argument("lp_norm hessian is not available at 0");
  }
  throw std::logic_error("unreachable");
}

double lambda_max_at(const MeanFunctionSpec& s, const Vec& z) {
  const std::vector<double> eig = symmetric_eigenvalues(hessian_f(s, z));
  return eig.back();
}

}  // namespace

double eval_gamma(const MeanFunctionSpec& spec, const Vec& z) {
  const int k = static_cast<int>(z.size());
  const MeanFunctionSpec s = spec.resolved(k);
  check_domain(s, z);
  return eval_gamma_resolved(s, z);
}

double eval_f(const MeanFunctionSpec& spec, const Vec& z) {
  const int k = static_cast<int>(z.size());
  const MeanFunctionSpec s = spec.resolved(k);
  check_domain(s, z);
  if (z.isZero(0.0)) return 0.0;
  return eval_gamma_resolved(s, z) - eval_gamma_resolved(s, Vec::Zero(k));
}

Vec grad_f_at_zero(const MeanFunctionSpec& spec, int k) {
  const MeanFunctionSpec s = spec.resolved(k);
  Vec g(k);
  switch (s.family) {
    case MeanFamily::log_sum_exp: {
      double total = 0.0;
      for (double t : s.theta) total += t;
      for (int i = 0; i < k; ++i) g[i] = s.theta[static_cast<std::size_t>(i)] / total;
      return g;
    }
    case MeanFamily::power: {
      double total = 0.0;
      for (double t : s.theta) total += t;
      const double factor = std::pow(total, (1.0 - s.l) / s.l);
      for (int i = 0; i < k; ++i) g[i] = s.theta[static_cast<std::size_t>(i)] * factor;
      return g;
    }
    case MeanFamily::delta11:
    case MeanFamily::delta12: {
      const bool first = s.family == MeanFamily::delta11;
      double t_acc = 0.0;
      for (double t : s.theta) {
        t_acc += t * (first ? d11(s.sigma) : d12(s.sigma));
      }
      const double outer = std::pow(t_acc, 1.0 / s.l - 1.0) / s.l;
      const double inner = first ? d11p(s.sigma) : d12p(s.sigma);
      for (int i = 0; i < k; ++i) {
        g[i] = outer * s.theta[static_cast<std::size_t>(i)] * inner;
      }
      return g;
    }
    case MeanFamily::lp_norm:
      throw std::invalid_argument(
          "grad_f_at_zero: lp_norm is not differentiable at 0");
  }
  throw std::logic_error("unreachable");
}

double lambda_star(const MeanFunctionSpec& spec, int k, int samples,
                   std::uint64_t seed) {
  const MeanFunctionSpec s = spec.resolved(k);
  if (s.family == MeanFamily::lp_norm) {
    throw std::invalid_argument("lambda_star: undefined for lp_norm");
  }
  if (samples < 0) throw std::invalid_argument("lambda_star: samples < 0");

  double best = 0.0;
  const auto consider = [&](const Vec& z) {
    best = std::max(best, lambda_max_at(s, z));
  };

  // All corners of the box when enumerable.
  if (k <= 10) {
    for (unsigned mask = 0; mask < (1u << k); ++mask) {
      Vec z(k);
      for (int i = 0; i < k; ++i) z[i] = (mask >> i) & 1u ? 1.0 : 0.0;
      consider(z);
    }
  }

  // Seeded multi-start compass search inside the box. Drawing start points
  // sequentially from one stream makes the estimate a running max, so more
  // samples can only increase it.
  SplitMix64 rng(seed);
  for (int t = 0; t < samples; ++t) {
    Vec z(k);
    for (int i = 0; i < k; ++i) z[i] = rng.next_unit();
    double val = lambda_max_at(s, z);
    best = std::max(best, val);
    double step = 0.25;
    int evals = 0;
    while (step > 1e-6 && evals < 200) {
      bool improved = false;
      for (int i = 0; i < k && evals < 200; ++i) {
        for (double dir : {+1.0, -1.0}) {
          Vec cand = z;
          cand[i] = std::clamp(cand[i] + dir * step, 0.0, 1.0);
          if (cand[i] == z[i]) continue;
          const double v = lambda_max_at(s, cand);
          ++evals;
          if (v > val) {
            val = v;
            z = cand;
            improved = true;
            best = std::max(best, val);
            break;
          }
        }
      }
      if (!improved) step *= 0.5;
    }
  }
  return 1.05 * best;
}

GGammaBundle g_gamma(const MeanFunctionSpec& spec, int k, double gamma,
                     int lambda_samples) {
  if (!(gamma > 0.0 && gamma <= 1.0)) {
    throw std::invalid_argument("g_gamma: gamma must lie in (0,1]");
  }
  const MeanFunctionSpec s = spec.resolved(k);
  GGammaBundle out;
  if (s.family == MeanFamily::lp_norm) {
    // Norm equivalence c1 ||z||_2 <= ||z||_l <= c2 ||z||_2 with the tight
    // constants; the selection rule then gives g = gamma * c1 / c2, which is
    // exactly gamma for l = 2.
    if (s.l == 2.0) {
      out.c = 1.0;
      out.grad_norm = 1.0;
      out.lambda_star = 0.0;
      out.g = gamma;
      return out;
    }
    const double e = 1.0 / s.l - 0.5;
    const double kf = static_cast<double>(k);
    out.c = s.l >= 2.0 ? std::pow(kf, e) : 1.0;
    out.grad_norm = s.l >= 2.0 ? 1.0 : std::pow(kf, e);
    out.lambda_star = 0.0;
    out.g = gamma * out.c / out.grad_norm;
    return out;
  }
  const Vec grad0 = grad_f_at_zero(s, k);
  out.c = grad0.minCoeff();
  out.grad_norm = grad0.norm();
  out.lambda_star = lambda_star(s, k, lambda_samples);
  // 2*gamma*c / (sqrt(||g0||^2 + 2*gamma*c*lambda*) + ||g0||); reduces to
  // gamma*c/||g0|| when lambda* = 0.
  const double num = 2.0 * gamma * out.c;
  out.g = num / (std::sqrt(out.grad_norm * out.grad_norm +
                           num * out.lambda_star) +
                 out.grad_norm);
  return out;
}

std::tuple<int, SupportSet, SupportSet> select_q(const Vec& r, int k,
                                                 double gamma,
                                                 const MeanFunctionSpec& spec) {
  if (k < 1 || k > r.size()) {
    throw std::invalid_argument("select_q: k out of range");
  }
  if (!(gamma > 0.0 && gamma <= 1.0)) {
    throw std::invalid_argument("select_q: gamma must lie in (0,1]");
  }
  const MeanFunctionSpec s = spec.resolved(k);
  const std::vector<int> order = magnitude_argsort(r);

  Vec mags(k);
  for (int i = 0; i < k; ++i) mags[i] = std::abs(r[order[static_cast<std::size_t>(i)]]);
  const double scale = mags.norm();
  if (scale == 0.0) {
    throw std::domain_error("select_q: top-k of r is zero");
  }

  const double f_full = eval_f(s, mags / scale);
  int q = k;
  for (int i = 1; i <= k; ++i) {
    Vec z = Vec::Zero(k);
    for (int j = 0; j < i; ++j) z[j] = mags[j] / scale;
    if (eval_f(s, z) >= gamma * f_full) {
      q = i;
      break;
    }
  }
  SupportSet omega_q(std::vector<int>(order.begin(), order.begin() + q));
  SupportSet omega_k(std::vector<int>(order.begin(), order.begin() + k));
  return {q, std::move(omega_q), std::move(omega_k)};
}

}  // namespace dtam
