#include "dtam/qp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace dtam {

namespace {

Vec clamp01(const Vec& v) {
  return v.cwiseMax(0.0).cwiseMin(1.0);
}

Vec project_equality(const Vec& v, int k) {
  const Eigen::Index d = v.size();
  if (k == d) return Vec::Ones(d);

  // phi(tau) = sum_i clamp(v_i - tau, 0, 1) decreases piecewise linearly from
  // d to 0; its breakpoints are v_i (coordinate leaves the linear range) and
  // v_i - 1 (coordinate enters it). Walk segments until phi crosses k.
  struct Event {
    double tau;
    bool enter_linear;  // true at v_i - 1, false at v_i
    double v;
  };
  std::vector<Event> events;
  events.reserve(static_cast<std::size_t>(2 * d));
  for (Eigen::Index i = 0; i < d; ++i) {
    events.push_back({v[i] - 1.0, true, v[i]});
    events.push_back({v[i], false, v[i]});
  }
  std::sort(events.begin(), events.end(),
            [](const Event& a, const Event& b) { return a.tau < b.tau; });

  double n_ones = static_cast<double>(d);
  double n_lin = 0.0;
  double sum_lin = 0.0;
  const double target = static_cast<double>(k);
  double tau = events.back().tau;
  bool found = false;
  for (const Event& ev : events) {
    // phi at this breakpoint with the state of the segment left of it.
    const double phi = n_ones + sum_lin - n_lin * ev.tau;
    if (phi <= target) {
      tau = n_lin > 0.0 ? (n_ones + sum_lin - target) / n_lin : ev.tau;
      found = true;
      break;
    }
    if (ev.enter_linear) {
      n_ones -= 1.0;
      n_lin += 1.0;
      sum_lin += ev.v;
    } else {
      n_lin -= 1.0;
      sum_lin -= ev.v;
    }
  }
  if (!found) {
    // phi is still above k right of the last breakpoint only through
    // rounding; the final linear piece has n_lin = 0 and phi = 0 there.
    tau = events.back().tau;
  }
  return clamp01(v.array() - tau);
}

}  // namespace

Vec project_capped_simplex(const Vec& v, const CappedSimplexSpec& spec) {
  if (v.size() != spec.dimension) {
    throw std::invalid_argument("project_capped_simplex: dimension mismatch");
  }
  if (spec.mass < 1) {
    throw std::invalid_argument("project_capped_simplex: mass must be positive");
  }
  if (spec.sum_mode == SumMode::equality && spec.mass > spec.dimension) {
    throw std::invalid_argument(
        "project_capped_simplex: equality infeasible, mass exceeds dimension");
  }
  if (spec.sum_mode == SumMode::at_most) {
    Vec w = clamp01(v);
    if (w.sum() <= static_cast<double>(spec.mass)) return w;
    // mass < dimension here: the clamped sum can only exceed k when k < d
  }
  return project_equality(v, spec.mass);
}

QpSolution solve_w_subproblem(const DenseMatrix& A, const Vec& y, const Vec& u,
                              const SupportSet& V, int k, SumMode mode,
                              std::vector<double>* objective_history) {
  if (y.size() != A.rows()) {
    throw std::invalid_argument("solve_w_subproblem: y length mismatch");
  }
  if (u.size() != A.cols()) {
    throw std::invalid_argument("solve_w_subproblem: u length mismatch");
  }
  if (!V.empty() && V.indices().back() >= A.cols()) {
    throw std::invalid_argument("solve_w_subproblem: V index out of range");
  }
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    if (u[i] != 0.0 && !V.contains(static_cast<int>(i))) {
      throw std::invalid_argument("solve_w_subproblem: u not supported in V");
    }
  }
  const int d = V.size();
  const CappedSimplexSpec simplex{d, k, mode};
  if (mode == SumMode::equality && k > d) {
    throw std::invalid_argument("solve_w_subproblem: equality mode needs k <= |V|");
  }

  QpSolution sol;
  sol.w = Vec::Zero(A.cols());
  if (d == 0) {
    sol.objective = y.squaredNorm();
    return sol;
  }

  // Restricted column scaling: column j of M is u_{V_j} * A_{:,V_j}.
  Mat M(A.rows(), d);
  for (int j = 0; j < d; ++j) {
    M.col(j) = A.mat().col(V.indices()[j]) * u[V.indices()[j]];
  }
  Mat G = Mat::Zero(d, d);
  G.selfadjointView<Eigen::Lower>().rankUpdate(M.transpose());
  const Vec b = M.transpose() * y;
  const double y_sq = y.squaredNorm();

  const auto project = [&](const Vec& w) {
    return project_capped_simplex(w, simplex);
  };

  // One Gram product is cached per point; gradients, objectives and the KKT
  // residual all derive from it.
  struct Point {
    Vec w;
    Vec Gw;
    double obj;
  };
  const auto eval = [&](Vec w) {
    Vec Gw = G.selfadjointView<Eigen::Lower>() * w;
    const double obj = w.dot(Gw) - 2.0 * b.dot(w) + y_sq;
    return Point{std::move(w), std::move(Gw), obj};
  };
  const auto grad_of = [&](const Point& p) -> Vec { return 2.0 * (p.Gw - b); };
  const auto kkt_of = [&](const Point& p) {
    return (p.w - project(p.w - grad_of(p))).lpNorm<Eigen::Infinity>();
  };

  const double start_value = mode == SumMode::equality
                                 ? static_cast<double>(k) / d
                                 : std::min(1.0, static_cast<double>(k) / d);
  Point x = eval(Vec::Constant(d, start_value));

  // Largest Gram eigenvalue by power iteration; the slight tilt keeps the
  // start vector off any eigenvector it might be orthogonal to.
  double lam = 0.0;
  {
    Vec pv(d);
    for (int i = 0; i < d; ++i) pv[i] = 1.0 + 1e-3 * i;
    pv.normalize();
    double prev = 0.0;
    for (int it = 0; it < 50; ++it) {
      Vec gv = G.selfadjointView<Eigen::Lower>() * pv;
      const double nrm = gv.norm();
      if (nrm == 0.0) {
        lam = 0.0;
        break;
      }
      pv = gv / nrm;
      lam = pv.dot(G.selfadjointView<Eigen::Lower>() * pv);
      if (std::abs(lam - prev) <= 1e-10 * std::max(1.0, std::abs(lam))) break;
      prev = lam;
    }
  }
  if (lam <= 0.0) {
    // u vanishes on V: the objective does not depend on w, keep the start.
    sol.w = Vec::Zero(A.cols());
    for (int j = 0; j < d; ++j) sol.w[V.indices()[j]] = x.w[j];
    sol.objective = x.obj;
    sol.kkt_residual = 0.0;
    if (objective_history) objective_history->push_back(x.obj);
    return sol;
  }
  const double step = 1.0 / (2.0 * lam);  // grad is 2(Gw - b)

  const double tol = 1e-8 * (1.0 + grad_of(x).lpNorm<Eigen::Infinity>());

  if (objective_history) objective_history->push_back(x.obj);
  Vec wy = x.w;   // accelerated point
  Vec Gy = x.Gw;  // its Gram product, maintained without extra products
  double t = 1.0;
  const int max_iters = 10000;
  int it = 0;
  double kkt_res = kkt_of(x);
  for (; it < max_iters && kkt_res > tol; ++it) {
    Point cand = eval(project(wy - step * 2.0 * (Gy - b)));
    if (cand.obj > x.obj) {
      // Accelerated step overshot: restart momentum and take a plain
      // projected-gradient step, which cannot increase the objective.
      cand = eval(project(x.w - step * grad_of(x)));
      t = 1.0;
      if (cand.obj > x.obj ||
          (cand.w - x.w).lpNorm<Eigen::Infinity>() == 0.0) {
        break;  // no representable progress left
      }
      x = std::move(cand);
      wy = x.w;
      Gy = x.Gw;
    } else {
      const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
      const double mom = (t - 1.0) / t_next;
      wy = cand.w + mom * (cand.w - x.w);
      Gy = cand.Gw + mom * (cand.Gw - x.Gw);
      t = t_next;
      x = std::move(cand);
    }
    if (objective_history) objective_history->push_back(x.obj);
    kkt_res = kkt_of(x);
  }

  sol.w = Vec::Zero(A.cols());
  for (int j = 0; j < d; ++j) sol.w[V.indices()[j]] = x.w[j];
  sol.objective = x.obj;
  sol.iterations = it;
  sol.kkt_residual = kkt_res;
  sol.converged = kkt_res <= tol;
  return sol;
}

}  // namespace dtam
