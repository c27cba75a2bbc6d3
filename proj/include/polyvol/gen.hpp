#pragma once

#include "polyvol/bodies.hpp"
#include "polyvol/rng.hpp"

namespace polyvol {

/// [-1, 1]^d with 2d facets.
HPolytope cube(int d);
/// The 2^d vertices of [-1, 1]^d.
VPolytope cube_v(int d);
/// conv{+-e_i}.
VPolytope cross(int d);
/// conv{0, e_1, ..., e_d}, volume 1/d!.
VPolytope simplex(int d);
/// {x >= 0, sum x <= 1}.
HPolytope simplex_h(int d);

/// m hyperplanes tangent to the unit sphere at uniform points. Redrawn when
/// the intersection is unbounded.
HPolytope rh(int d, int m, RngStream& rng);
/// n uniform points of the unit sphere.
VPolytope rv(int d, int n, RngStream& rng);
/// k segments with uniform directions and lengths uniform in [0, sqrt(d)].
Zonotope zono(int d, int k, RngStream& rng);

/// True when every coordinate is bounded above and below over p.
bool is_bounded(const HPolytope& p);

}  // namespace polyvol
