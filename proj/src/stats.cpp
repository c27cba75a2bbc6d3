#include "polyvol/stats.hpp"

#include <cmath>
#include <stdexcept>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

namespace polyvol {

double t_quantile(int dof, double alpha) {
  if (dof < 1) throw std::invalid_argument("t_quantile: dof must be >= 1");
  if (!(alpha > 0.0 && alpha <= 0.5)) throw std::invalid_argument("t_quantile: alpha must lie in (0, 0.5]");
  const boost::math::students_t_distribution<double> dist(static_cast<double>(dof));
  return boost::math::quantile(boost::math::complement(dist, alpha));
}

double inverse_normal_quantile(double q) {
  if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("inverse_normal_quantile: q must lie in (0, 1)");
  return boost::math::quantile(boost::math::normal_distribution<double>(), q);
}

double normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

}  // namespace polyvol
