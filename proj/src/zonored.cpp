#include "polyvol/zonored.hpp"

#include <cmath>
#include <sstream>

namespace polyvol {

Matrix interval_hull(const Matrix& h) {
  return h.cwiseAbs().rowwise().sum().asDiagonal();
}

ReducedZonotope pca_reduce(const Zonotope& z) {
  const Matrix& g = z.generators;
  Matrix x(2 * g.cols(), g.rows());
  x.topRows(g.cols()) = g.transpose();
  x.bottomRows(g.cols()) = -g.transpose();
  const SvdResult s = svd(x.transpose() * x);
  const int rank = numeric_rank(s.singular_values);
  if (rank < z.dim()) {
    std::ostringstream msg;
    msg << "pca_reduce: generator matrix has numeric rank " << rank << " < " << z.dim();
    throw NumericError(msg.str());
  }
  const Matrix& u = s.u;
  return ReducedZonotope{u * interval_hull(u.transpose() * g)};
}

double parallelotope_volume_log(const Matrix& g) {
  if (g.rows() != g.cols()) throw std::invalid_argument("parallelotope_volume_log: matrix must be square");
  return static_cast<double>(g.rows()) * std::log(2.0) + log_abs_determinant(g);
}

Fitness fitness(const Zonotope& z, const VolumeConfig& cfg) {
  Fitness f;
  f.vol_red_log = parallelotope_volume_log(pca_reduce(z).g_red);
  f.report = volume(z, cfg);
  f.vol_p_log = f.report.log_volume;
  f.r = std::exp((f.vol_red_log - f.vol_p_log) / z.dim());
  return f;
}

}  // namespace polyvol
