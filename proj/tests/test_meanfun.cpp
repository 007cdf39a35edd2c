#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dtam/meanfun.hpp"
#include "dtam/rng.hpp"
#include "oracles.hpp"

using namespace dtam;

namespace {

MeanFunctionSpec make_spec(MeanFamily family, double sigma = 1.0, double l = 2.0) {
  MeanFunctionSpec s;
  s.family = family;
  s.sigma = sigma;
  s.l = l;
  return s;
}

const std::vector<MeanFamily> kSmoothFamilies = {
    MeanFamily::log_sum_exp, MeanFamily::power, MeanFamily::delta11,
    MeanFamily::delta12};

Vec box_point(SplitMix64& rng, int k) {
  Vec z(k);
  for (int i = 0; i < k; ++i) z[i] = rng.next_unit();
  return z;
}

}  // namespace

TEST_CASE("f vanishes at the origin and collapses to identity for k=1 lse") {
  const MeanFunctionSpec lse = make_spec(MeanFamily::log_sum_exp);
  CHECK(eval_f(lse, Vec::Zero(4)) == 0.0);

  for (double t : {0.0, 0.25, 0.8, 1.0}) {
    Vec z(1);
    z[0] = t;
    CHECK(eval_f(lse, z) == doctest::Approx(t).epsilon(1e-14));
  }
}

TEST_CASE("power family: hand-evaluated point") {
  const MeanFunctionSpec p = make_spec(MeanFamily::power, 1.0, 2.0);
  Vec z(2);
  z << 1, 0;
  // Gamma(z) = sqrt((1+1)^2 + (0+1)^2) - 1 = sqrt(5) - 1
  CHECK(eval_gamma(p, z) == doctest::Approx(std::sqrt(5.0) - 1.0).epsilon(1e-14));
  // f(z) = Gamma(z) - Gamma(0) = sqrt(5) - sqrt(2)
  CHECK(eval_f(p, z) ==
        doctest::Approx(std::sqrt(5.0) - std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("domain violations are rejected") {
  const MeanFunctionSpec p = make_spec(MeanFamily::power, 0.5, 2.0);
  Vec z(2);
  z << -0.6, 0.0;  // below -sigma
  CHECK_THROWS_AS(eval_f(p, z), std::invalid_argument);
  MeanFunctionSpec bad = make_spec(MeanFamily::power, 1.0, 1.0);  // l must be > 1
  CHECK_THROWS_AS(bad.validate(2), std::invalid_argument);
  MeanFunctionSpec bad_theta = make_spec(MeanFamily::log_sum_exp);
  bad_theta.theta = {1.0, -1.0};
  CHECK_THROWS_AS(bad_theta.validate(2), std::invalid_argument);
}

TEST_CASE("grad_f_at_zero: uniform lse and finite differences") {
  const MeanFunctionSpec lse = make_spec(MeanFamily::log_sum_exp);
  for (int k : {1, 3, 6}) {
    const Vec g = grad_f_at_zero(lse, k);
    for (int i = 0; i < k; ++i) {
      CHECK(g[i] == doctest::Approx(1.0 / k).epsilon(1e-12));
    }
  }

  CHECK_THROWS_AS(grad_f_at_zero(make_spec(MeanFamily::lp_norm), 3),
                  std::invalid_argument);

  SplitMix64 rng(31);
  for (const MeanFamily family : kSmoothFamilies) {
    for (int trial = 0; trial < 3; ++trial) {
      const int k = 2 + static_cast<int>(rng.next_below(3));
      MeanFunctionSpec s = make_spec(family, 1.0, family == MeanFamily::power ? 2.5 : 1.7);
      s.theta.clear();
      for (int i = 0; i < k; ++i) s.theta.push_back(0.5 + rng.next_unit());
      const Vec analytic = grad_f_at_zero(s, k);
      const Vec fd = oracles::fd_gradient_forward(
          [&](const Vec& z) { return eval_f(s, z); }, Vec::Zero(k), 1e-6);
      CHECK((analytic - fd).norm() <= 1e-5 * (1.0 + fd.norm()));
      CHECK(analytic.minCoeff() > 0.0);
    }
  }
}

TEST_CASE("lambda_star: affine collapse, grid oracle, sample monotonicity") {
  // k=1 lse with unit weights is affine, so the hessian vanishes.
  CHECK(lambda_star(make_spec(MeanFamily::log_sum_exp), 1) <= 1e-9);

  // k=2 lse: the estimate must dominate a dense-grid scan where the hessian
  // is taken by finite differences (an independent route).
  const MeanFunctionSpec lse = make_spec(MeanFamily::log_sum_exp);
  double grid_max = 0.0;
  for (int i = 0; i <= 100; ++i) {
    for (int j = 0; j <= 100; ++j) {
      Vec z(2);
      z << i / 100.0, j / 100.0;
      const Mat h = oracles::fd_hessian(
          [&](const Vec& p) { return eval_f(lse, p); }, z, 1e-4);
      Eigen::SelfAdjointEigenSolver<Mat> eig(0.5 * (h + h.transpose()));
      grid_max = std::max(grid_max, eig.eigenvalues().maxCoeff());
    }
  }
  const double estimate = lambda_star(lse, 2, 32);
  CHECK(estimate >= grid_max - 1e-5);
  // known analytic maximum for this case is 1/2
  CHECK(grid_max == doctest::Approx(0.5).epsilon(1e-3));

  // running-max property in the number of samples
  double prev = 0.0;
  for (int samples : {0, 4, 16, 64}) {
    const double est = lambda_star(lse, 2, samples);
    CHECK(est >= prev);
    prev = est;
  }

  CHECK_THROWS_AS(lambda_star(make_spec(MeanFamily::lp_norm), 2),
                  std::invalid_argument);
}

TEST_CASE("g_gamma: l2 identity, case formulas, range") {
  for (double gamma : {0.1, 0.5, 1.0}) {
    const GGammaBundle b = g_gamma(make_spec(MeanFamily::lp_norm, 1.0, 2.0), 7, gamma);
    CHECK(b.g == gamma);  // exact
  }

  // k=1 lse: f(z)=z, c = ||grad|| = 1, lambda* = 0 -> g = gamma
  const GGammaBundle unit = g_gamma(make_spec(MeanFamily::log_sum_exp), 1, 0.3);
  CHECK(unit.g == doctest::Approx(0.3).epsilon(1e-12));

  // k=2 lse, gamma=1: formula consistency and 0 < g < 1
  const GGammaBundle b2 = g_gamma(make_spec(MeanFamily::log_sum_exp), 2, 1.0);
  CHECK(b2.c == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(b2.grad_norm == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  const double expected =
      2.0 * b2.c /
      (std::sqrt(b2.grad_norm * b2.grad_norm + 2.0 * b2.c * b2.lambda_star) +
       b2.grad_norm);
  CHECK(b2.g == doctest::Approx(expected).epsilon(1e-12));
  CHECK(b2.g > 0.0);
  CHECK(b2.g < 1.0);

  CHECK_THROWS_AS(g_gamma(make_spec(MeanFamily::log_sum_exp), 2, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(g_gamma(make_spec(MeanFamily::log_sum_exp), 2, 1.5),
                  std::invalid_argument);
}

TEST_CASE("g_gamma is nondecreasing in gamma and bounded by 1") {
  for (const MeanFamily family : kSmoothFamilies) {
    const MeanFunctionSpec s = make_spec(family, 1.0, 1.8);
    double prev = 0.0;
    for (double gamma = 0.1; gamma <= 1.0; gamma += 0.15) {
      const double g = g_gamma(s, 4, gamma).g;
      CHECK(g >= prev - 1e-15);
      CHECK(g > 0.0);
      CHECK(g <= 1.0);
      prev = g;
    }
  }
}

TEST_CASE("select_q: forced small cases") {
  const MeanFunctionSpec l2 = make_spec(MeanFamily::lp_norm, 1.0, 2.0);

  // distinct magnitudes, gamma=1: strictly increasing ratio forces q=k
  Vec r(5);
  r << 5, -4, 3, 2, 1;
  const auto [qk, oq, ok] = select_q(r, 4, 1.0, l2);
  CHECK(qk == 4);
  CHECK(oq == ok);

  // top-2 magnitudes (4,3): at i=1 the ratio is 4/5 >= 0.5
  Vec r2(4);
  r2 << 0.5, 4, -3, 0.25;
  const auto [q1, oq1, ok1] = select_q(r2, 2, 0.5, l2);
  CHECK(q1 == 1);
  CHECK(oq1.indices() == std::vector<int>({1}));
  CHECK(ok1.indices() == std::vector<int>({1, 2}));

  // exactly j < k nonzeros saturates the ratio at i=j
  Vec r3 = Vec::Zero(6);
  r3[4] = 2.0;
  r3[0] = -1.0;
  for (double gamma : {0.2, 0.7, 1.0}) {
    const auto [q, oqj, okj] = select_q(r3, 4, gamma, l2);
    CHECK(q <= 2);
  }

  CHECK_THROWS_AS(select_q(Vec::Zero(5), 3, 0.5, l2), std::domain_error);
}

TEST_CASE("select_q is scale invariant") {
  SplitMix64 rng(32);
  const MeanFunctionSpec specs[] = {
      make_spec(MeanFamily::log_sum_exp), make_spec(MeanFamily::power),
      make_spec(MeanFamily::delta11, 1.0, 1.5),
      make_spec(MeanFamily::lp_norm, 1.0, 3.0)};
  for (const auto& spec : specs) {
    for (int trial = 0; trial < 20; ++trial) {
      const Vec r = oracles::randn_vec(rng, 15);
      const int k = 1 + static_cast<int>(rng.next_below(6));
      const double gamma = 0.05 + 0.95 * rng.next_unit();
      for (double c : {1e-6, 3.0, 1e6}) {
        const auto [q0, a0, b0] = select_q(r, k, gamma, spec);
        const auto [q1, a1, b1] = select_q(c * r, k, gamma, spec);
        CHECK(q0 == q1);
        CHECK(a0 == a1);
        CHECK(b0 == b1);
      }
    }
  }
}

TEST_CASE("selected prefix captures at least g(gamma) of the top-k energy") {
  SplitMix64 rng(33);
  const MeanFunctionSpec specs[] = {
      make_spec(MeanFamily::log_sum_exp), make_spec(MeanFamily::power),
      make_spec(MeanFamily::delta11, 1.0, 1.5),
      make_spec(MeanFamily::delta12, 1.0, 2.0),
      make_spec(MeanFamily::lp_norm, 1.0, 2.0),
      make_spec(MeanFamily::lp_norm, 1.0, 4.0)};
  for (const auto& spec : specs) {
    for (int trial = 0; trial < 40; ++trial) {
      const int k = 1 + static_cast<int>(rng.next_below(8));
      const Vec r = oracles::randn_vec(rng, 20);
      const double gamma = 0.05 + 0.95 * rng.next_unit();
      const auto [q, oq, ok] = select_q(r, k, gamma, spec);
      const double g = g_gamma(spec, k, gamma).g;
      const double lhs = restrict_to_support(r, oq).norm();
      const double rhs = restrict_to_support(r, ok).norm();
      CHECK(lhs >= g * rhs - 1e-12);
      CHECK(q >= 1);
      CHECK(q <= k);
    }
  }
}

TEST_CASE("f is strictly increasing and midpoint convex on the box") {
  SplitMix64 rng(34);
  std::vector<MeanFunctionSpec> specs;
  for (const MeanFamily family : kSmoothFamilies) {
    specs.push_back(make_spec(family, 1.0, 1.8));
  }
  specs.push_back(make_spec(MeanFamily::lp_norm, 1.0, 2.5));

  for (const auto& spec : specs) {
    for (int trial = 0; trial < 1000; ++trial) {
      const int k = 2 + static_cast<int>(rng.next_below(4));
      const Vec z1 = box_point(rng, k);
      const Vec z2 = box_point(rng, k);
      const double mid = eval_f(spec, 0.5 * (z1 + z2));
      CHECK(mid <= 0.5 * (eval_f(spec, z1) + eval_f(spec, z2)) + 1e-12);
    }
    if (spec.family == MeanFamily::lp_norm) continue;  // not strict at 0
    for (int trial = 0; trial < 200; ++trial) {
      const int k = 2 + static_cast<int>(rng.next_below(4));
      const Vec z1 = box_point(rng, k);
      Vec z2 = z1;
      const int bump = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(k)));
      z2[bump] += 1e-3 * (1.0 + rng.next_unit());
      CHECK(eval_f(spec, z2) > eval_f(spec, z1));
    }
  }
}
