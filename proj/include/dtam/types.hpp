#ifndef DTAM_TYPES_HPP
#define DTAM_TYPES_HPP

#include <Eigen/Dense>
#include <optional>

namespace dtam {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;  // column-major

// Dense m-by-n measurement matrix. Entries are validated to be finite at
// construction; downstream code assumes finiteness throughout. Storage is
// column-major so that support-restricted column gathers are contiguous.
class DenseMatrix {
 public:
  explicit DenseMatrix(Mat values);

  Eigen::Index rows() const { return mat_.rows(); }
  Eigen::Index cols() const { return mat_.cols(); }
  const Mat& mat() const { return mat_; }

 private:
  Mat mat_;
};

// One sparse recovery instance: minimize ||y - A x||_2^2 over ||x||_0 <= k.
// Ground truth and noise are optional and only used for evaluation.
struct RecoveryProblem {
  DenseMatrix A;
  Vec y;
  int k;
  std::optional<Vec> ground_truth;
  std::optional<Vec> noise;

  RecoveryProblem(DenseMatrix A_, Vec y_, int k_,
                  std::optional<Vec> ground_truth_ = std::nullopt,
                  std::optional<Vec> noise_ = std::nullopt);
};

}  // namespace dtam

#endif  // DTAM_TYPES_HPP
