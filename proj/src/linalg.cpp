#include "polyvol/linalg.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace polyvol {

SvdResult svd(const Matrix& a) {
  if (a.rows() < 1 || a.cols() < 1) throw std::invalid_argument("svd: empty matrix");
  if (!a.allFinite()) throw std::invalid_argument("svd: non-finite entries");

  Eigen::JacobiSVD<Matrix> jacobi(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  SvdResult out{jacobi.matrixU(), jacobi.singularValues(), jacobi.matrixV()};

  const double scale = std::max(1.0, a.norm());
  const double residual =
      (out.u * out.singular_values.asDiagonal() * out.v.transpose() - a).norm();
  if (!(residual <= 1e-10 * scale)) {
    std::ostringstream msg;
    msg << "svd: Jacobi iteration did not converge, residual " << residual;
    throw NumericError(msg.str());
  }
  return out;
}

int numeric_rank(const Vector& singular_values) {
  if (singular_values.size() == 0) return 0;
  const double cutoff = kRankTolerance * singular_values.maxCoeff();
  int rank = 0;
  for (double s : singular_values)
    if (s > cutoff) ++rank;
  return rank;
}

double lu_determinant(const Matrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("lu_determinant: matrix not square");
  if (a.rows() == 0) return 1.0;
  Eigen::FullPivLU<Matrix> lu(a);
  if (!lu.isInvertible()) return 0.0;
  return lu.determinant();
}

double log_abs_determinant(const Matrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("log_abs_determinant: matrix not square");
  Eigen::FullPivLU<Matrix> lu(a);
  if (!lu.isInvertible()) return -std::numeric_limits<double>::infinity();
  const auto& packed = lu.matrixLU();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < packed.rows(); ++i) acc += std::log(std::abs(packed(i, i)));
  return acc;
}

Matrix null_space_complement(const Matrix& q) {
  const Eigen::Index k = q.rows();
  const Eigen::Index r = q.cols();
  if (r >= k) throw std::invalid_argument("null_space_complement: q must have fewer columns than rows");

  Eigen::JacobiSVD<Matrix> jacobi(q, Eigen::ComputeFullU);
  const int rank = numeric_rank(jacobi.singularValues());
  if (rank != r) {
    std::ostringstream msg;
    msg << "null_space_complement: q has numeric rank " << rank << ", expected " << r;
    throw NumericError(msg.str());
  }
  return jacobi.matrixU().rightCols(k - r).transpose();
}

}  // namespace polyvol
