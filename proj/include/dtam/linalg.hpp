#ifndef DTAM_LINALG_HPP
#define DTAM_LINALG_HPP

#include <vector>

#include "dtam/types.hpp"

namespace dtam {

// An index set over [0,n), kept strictly increasing and duplicate-free.
class SupportSet {
 public:
  SupportSet() = default;
  // Sorts and validates; throws on duplicates or negative indices.
  explicit SupportSet(std::vector<int> indices);

  static SupportSet full(int n);

  int size() const { return static_cast<int>(indices_.size()); }
  bool empty() const { return indices_.empty(); }
  bool contains(int i) const;
  const std::vector<int>& indices() const { return indices_; }
  SupportSet union_with(const SupportSet& other) const;

  bool operator==(const SupportSet& other) const = default;

 private:
  std::vector<int> indices_;
};

// Nonzero positions of u (exact comparison with zero).
SupportSet support_of(const Vec& u);

// Full argsort of u by decreasing magnitude; ties broken towards the smaller
// index. The prefixes of this order are the nested sets L_1(u), L_2(u), ...
std::vector<int> magnitude_argsort(const Vec& u);

// Indices of the k largest-magnitude entries (smaller index wins ties).
SupportSet top_k_indices(const Vec& u, int k);

// Keeps the k largest-magnitude entries of u, zeros the rest.
Vec hard_threshold(const Vec& u, int k);

// Full-length vector agreeing with u on S, zero elsewhere.
Vec restrict_to_support(const Vec& u, const SupportSet& S);

// Minimizer of ||y - A x||_2 over supp(x) <= S, via a rank-revealing
// column-pivoted QR of the restricted matrix (tolerance 1e-12 relative).
// Rank-deficient systems yield the minimum-norm solution.
Vec least_squares_on_support(const DenseMatrix& A, const Vec& y,
                             const SupportSet& S);

// Eigenvalues of a small symmetric matrix by cyclic Jacobi rotations,
// returned in ascending order. Off-diagonal tolerance 1e-13 relative.
std::vector<double> symmetric_eigenvalues(Mat S);

}  // namespace dtam

#endif  // DTAM_LINALG_HPP
