#include "dtam/ops.hpp"

#include <stdexcept>
#include <string>

namespace dtam {

namespace {

void check_dims(const DenseMatrix& A, const Vec& x, const Vec& y) {
  if (x.size() != A.cols()) {
    throw std::invalid_argument("x has length " + std::to_string(x.size()) +
                                ", expected " + std::to_string(A.cols()));
  }
  if (y.size() != A.rows()) {
    throw std::invalid_argument("y has length " + std::to_string(y.size()) +
                                ", expected " + std::to_string(A.rows()));
  }
}

}  // namespace

Vec residual(const DenseMatrix& A, const Vec& x, const Vec& y) {
  check_dims(A, x, y);
  return y - A.mat() * x;
}

Vec neg_gradient(const DenseMatrix& A, const Vec& x, const Vec& y) {
  check_dims(A, x, y);
  return A.mat().transpose() * (y - A.mat() * x);
}

DenseMatrix normalize_columns(const DenseMatrix& Ahat) {
  Mat out = Ahat.mat();
  for (Eigen::Index j = 0; j < out.cols(); ++j) {
    const double nrm = out.col(j).norm();
    if (nrm == 0.0) {
      throw std::invalid_argument("normalize_columns: column " +
                                  std::to_string(j) + " is zero");
    }
    out.col(j) /= nrm;
  }
  return DenseMatrix(std::move(out));
}

}  // namespace dtam
