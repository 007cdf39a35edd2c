#ifndef DTAM_OPS_HPP
#define DTAM_OPS_HPP

#include "dtam/types.hpp"

namespace dtam {

// y - A*x
Vec residual(const DenseMatrix& A, const Vec& x, const Vec& y);

// A^T (y - A*x), the negative gradient of ||y - A x||_2^2 / 2.
Vec neg_gradient(const DenseMatrix& A, const Vec& x, const Vec& y);

// Rescales every column to unit l2 norm. Throws on a zero column, naming
// its index.
DenseMatrix normalize_columns(const DenseMatrix& Ahat);

}  // namespace dtam

#endif  // DTAM_OPS_HPP
