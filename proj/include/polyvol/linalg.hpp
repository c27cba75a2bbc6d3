#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace polyvol {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Raised when a numerical kernel cannot deliver its contract (no convergence,
// rank defect, cycling). The message carries the offending quantity.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SvdResult {
  Matrix u;                 // orthonormal columns
  Vector singular_values;   // descending, nonnegative
  Matrix v;                 // orthonormal columns
};

// Singular values at or below this fraction of the largest count as zero.
inline constexpr double kRankTolerance = 1e-10;

/// Thin SVD, a = U diag(S) V^T with p = min(rows, cols) columns in U and V.
/// Throws NumericError if the reconstruction residual exceeds
/// 1e-10 * max(1, ||a||_F).
SvdResult svd(const Matrix& a);

/// Number of singular values above kRankTolerance * sigma_max.
int numeric_rank(const Vector& singular_values);

double lu_determinant(const Matrix& a);

/// log |det a|; -inf when a is singular.
double log_abs_determinant(const Matrix& a);

/// Given q (k x r, rank r), returns the (k - r) x k matrix whose orthonormal
/// rows span the orthogonal complement of col(q).
Matrix null_space_complement(const Matrix& q);

}  // namespace polyvol
