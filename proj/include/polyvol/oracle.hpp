#pragma once

#include <functional>

#include "polyvol/bodies.hpp"
#include "polyvol/rng.hpp"

namespace polyvol {

// Natural logs of closed-form volumes.
double exact_cube(int d);
double exact_cross(int d);
double exact_simplex(int d);

/// log(2^d sum_{|S| = d} |det G_S|). Limited to C(k, d) <= 1e6 subsets.
double exact_zonotope(const Zonotope& z);

struct McEstimate {
  double estimate;
  double std_error;
};

/// Rejection sampling from the box [lo, hi].
McEstimate mc_rejection(const std::function<bool(const Vector&)>& inside, const Vector& lo, const Vector& hi,
                        std::int64_t n, RngStream& rng);
McEstimate mc_rejection(const ConvexBody& body, const Vector& lo, const Vector& hi, std::int64_t n, RngStream& rng);

}  // namespace polyvol
