#include "dtam/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace dtam {

SupportSet::SupportSet(std::vector<int> indices) : indices_(std::move(indices)) {
  std::sort(indices_.begin(), indices_.end());
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    if (indices_[i] < 0) {
      throw std::invalid_argument("SupportSet: negative index");
    }
    if (i > 0 && indices_[i] == indices_[i - 1]) {
      throw std::invalid_argument("SupportSet: duplicate index " +
                                  std::to_string(indices_[i]));
    }
  }
}

SupportSet SupportSet::full(int n) {
  std::vector<int> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  return SupportSet(std::move(idx));
}

bool SupportSet::contains(int i) const {
  return std::binary_search(indices_.begin(), indices_.end(), i);
}

SupportSet SupportSet::union_with(const SupportSet& other) const {
  std::vector<int> merged;
  merged.reserve(indices_.size() + other.indices_.size());
  std::set_union(indices_.begin(), indices_.end(), other.indices_.begin(),
                 other.indices_.end(), std::back_inserter(merged));
  SupportSet out;
  out.indices_ = std::move(merged);
  return out;
}

SupportSet support_of(const Vec& u) {
  std::vector<int> idx;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    if (u[i] != 0.0) idx.push_back(static_cast<int>(i));
  }
  return SupportSet(std::move(idx));
}

std::vector<int> magnitude_argsort(const Vec& u) {
  std::vector<int> order(static_cast<std::size_t>(u.size()));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&u](int a, int b) {
    const double ma = std::abs(u[a]);
    const double mb = std::abs(u[b]);
    if (ma != mb) return ma > mb;
    return a < b;
  });
  return order;
}

SupportSet top_k_indices(const Vec& u, int k) {
  if (k < 0 || k > u.size()) {
    throw std::invalid_argument("top_k_indices: k out of range");
  }
  if (k == 0) return SupportSet();
  const std::vector<int> order = magnitude_argsort(u);
  return SupportSet(
      std::vector<int>(order.begin(), order.begin() + k));
}

Vec hard_threshold(const Vec& u, int k) {
  return restrict_to_support(u, top_k_indices(u, k));
}

Vec restrict_to_support(const Vec& u, const SupportSet& S) {
  Vec out = Vec::Zero(u.size());
  for (int i : S.indices()) {
    if (i >= u.size()) {
      throw std::invalid_argument("restrict_to_support: index " +
                                  std::to_string(i) + " out of range");
    }
    out[i] = u[i];
  }
  return out;
}

Vec least_squares_on_support(const DenseMatrix& A, const Vec& y,
                             const SupportSet& S) {
  if (y.size() != A.rows()) {
    throw std::invalid_argument("least_squares_on_support: y length mismatch");
  }
  const Eigen::Index n = A.cols();
  Vec x = Vec::Zero(n);
  if (S.empty()) return x;
  if (S.indices().back() >= n) {
    throw std::invalid_argument("least_squares_on_support: index out of range");
  }
  const int s = S.size();
  Mat As(A.rows(), s);
  for (int j = 0; j < s; ++j) As.col(j) = A.mat().col(S.indices()[j]);
  Eigen::CompleteOrthogonalDecomposition<Mat> cod(As);
  cod.setThreshold(1e-12);
  const Vec z = cod.solve(y);
  for (int j = 0; j < s; ++j) x[S.indices()[j]] = z[j];
  return x;
}

std::vector<double> symmetric_eigenvalues(Mat S) {
  if (S.rows() != S.cols()) {
    throw std::invalid_argument("symmetric_eigenvalues: matrix not square");
  }
  const Eigen::Index n = S.rows();
  if (n == 1) return {S(0, 0)};
  const double scale = std::max(S.cwiseAbs().maxCoeff(), 1e-300);
  const double tol = 1e-13 * scale;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        off = std::max(off, std::abs(S(p, q)));
      }
    }
    if (off <= tol) break;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (std::abs(S(p, q)) <= tol * 1e-2) continue;
        const double theta = (S(q, q) - S(p, p)) / (2.0 * S(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Eigen::Index i = 0; i < n; ++i) {
          const double sip = S(i, p), siq = S(i, q);
          S(i, p) = c * sip - s * siq;
          S(i, q) = s * sip + c * siq;
        }
        for (Eigen::Index i = 0; i < n; ++i) {
          const double spi = S(p, i), sqi = S(q, i);
          S(p, i) = c * spi - s * sqi;
          S(q, i) = s * spi + c * sqi;
        }
      }
    }
  }
  std::vector<double> eig(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) eig[static_cast<std::size_t>(i)] = S(i, i);
  std::sort(eig.begin(), eig.end());
  return eig;
}

}  // namespace dtam
