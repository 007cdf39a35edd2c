#include "dtam/types.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace dtam {

DenseMatrix::DenseMatrix(Mat values) : mat_(std::move(values)) {
  if (mat_.rows() <= 0 || mat_.cols() <= 0) {
    throw std::invalid_argument("DenseMatrix: dimensions must be positive");
  }
  if (!mat_.allFinite()) {
    throw std::invalid_argument("DenseMatrix: entries must be finite");
  }
}

RecoveryProblem::RecoveryProblem(DenseMatrix A_, Vec y_, int k_,
                                 std::optional<Vec> ground_truth_,
                                 std::optional<Vec> noise_)
    : A(std::move(A_)),
      y(std::move(y_)),
      k(k_),
      ground_truth(std::move(ground_truth_)),
      noise(std::move(noise_)) {
  const Eigen::Index m = A.rows();
  const Eigen::Index n = A.cols();
  if (y.size() != m) {
    throw std::invalid_argument("RecoveryProblem: y has length " +
                                std::to_string(y.size()) + ", expected " +
                                std::to_string(m));
  }
  if (k < 1 || k > n) {
    throw std::invalid_argument("RecoveryProblem: k must satisfy 1 <= k <= n");
  }
  if (!y.allFinite()) {
    throw std::invalid_argument("RecoveryProblem: y must be finite");
  }
  if (ground_truth && ground_truth->size() != n) {
    throw std::invalid_argument("RecoveryProblem: ground truth has wrong length");
  }
  if (noise && noise->size() != m) {
    throw std::invalid_argument("RecoveryProblem: noise has wrong length");
  }
  if (ground_truth && noise) {
    const Vec reconstructed = A.mat() * (*ground_truth) + (*noise);
    const double scale = std::max(1.0, y.norm());
    if ((y - reconstructed).norm() > 1e-12 * scale) {
      throw std::invalid_argument(
          "RecoveryProblem: y != A*ground_truth + noise");
    }
  }
}

}  // namespace dtam
