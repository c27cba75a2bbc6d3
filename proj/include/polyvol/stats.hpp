#pragma once

namespace polyvol {

/// Upper-tail quantile of Student's t: P(T > t) = alpha, T ~ t(dof).
double t_quantile(int dof, double alpha);

/// Phi^{-1}(q) for the standard normal.
double inverse_normal_quantile(double q);

double normal_cdf(double x);

}  // namespace polyvol
