#pragma once

#include "polyvol/bodies.hpp"
#include "polyvol/estimate.hpp"

namespace polyvol {

/// diag(sum_j |h_ij|): generators of the smallest axis-aligned box around the
/// zonotope generated by the columns of h.
Matrix interval_hull(const Matrix& h);

struct ReducedZonotope {
  Matrix g_red;  // d x d
};

/// PCA order reduction: G_red = U IH(U^T G), U from the SVD of X^T X with X = [G | -G]^T.
ReducedZonotope pca_reduce(const Zonotope& z);

/// log(2^d |det g|), the volume of the image of [-1, 1]^d; -inf if singular.
double parallelotope_volume_log(const Matrix& g);

struct Fitness {
  double r = 0.0;
  double vol_p_log = 0.0;
  double vol_red_log = 0.0;
  VolumeReport report;
};

/// R = (vol(P_red) / vol(P))^(1/d) with vol(P) estimated by `volume`.
Fitness fitness(const Zonotope& z, const VolumeConfig& cfg);

}  // namespace polyvol
