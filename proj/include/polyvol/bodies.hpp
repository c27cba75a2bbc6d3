#pragma once

#include <memory>
#include <string>
#include <variant>

#include "polyvol/linalg.hpp"
#include "polyvol/lp.hpp"

namespace polyvol {

// Slack allowed by closed-form membership checks.
inline constexpr double kMembershipTol = 1e-9;

/// { x : a x <= b }, one facet normal per row of a.
struct HPolytope {
  Matrix a;
  Vector b;

  HPolytope() = default;
  HPolytope(Matrix a, Vector b);
  int dim() const { return static_cast<int>(a.cols()); }
  int num_facets() const { return static_cast<int>(a.rows()); }
};

/// Convex hull of the rows of `vertices`.
struct VPolytope {
  Matrix vertices;

  VPolytope() = default;
  explicit VPolytope(Matrix vertices);
  int dim() const { return static_cast<int>(vertices.cols()); }
  int num_vertices() const { return static_cast<int>(vertices.rows()); }
};

/// Image of [-1, 1]^k under the d x k generator matrix.
struct Zonotope {
  Matrix generators;

  Zonotope() = default;
  explicit Zonotope(Matrix generators);
  int dim() const { return static_cast<int>(generators.rows()); }
  int num_generators() const { return static_cast<int>(generators.cols()); }
  double order() const { return static_cast<double>(num_generators()) / dim(); }
};

struct Ball {
  Vector center;
  double radius = 1.0;

  Ball() = default;
  Ball(Vector center, double radius);
  int dim() const { return static_cast<int>(center.size()); }
};

/// { x : M x <= b_min + t (b_max - b_min) }. The normals are shared by every
/// body of one schedule; only the offset endpoints and t differ.
struct ShiftedHBody {
  std::shared_ptr<const Matrix> normals;
  Vector b0;
  Vector b_min;
  Vector b_max;
  double t = 0.0;

  int dim() const { return static_cast<int>(normals->cols()); }
  double offset(Eigen::Index row) const { return b_min[row] + t * (b_max[row] - b_min[row]); }
  Vector offsets() const { return b_min + t * (b_max - b_min); }
  HPolytope to_hpolytope() const { return HPolytope(*normals, offsets()); }
};

// Input bodies. A ball is accepted so that schedules can be exercised on
// bodies with closed-form volume.
using ConvexBody = std::variant<HPolytope, VPolytope, Zonotope, Ball>;
// Bodies C_i of the multiphase sequence.
using MmcBody = std::variant<Ball, ShiftedHBody>;

int dimension(const ConvexBody& body);
int dimension(const MmcBody& body);
std::string representation_name(const ConvexBody& body);

// Line p + t v meets the body for t in [lo, hi].
struct Chord {
  double lo;
  double hi;
};

bool contains(const HPolytope& p, const Vector& x);
bool contains(const VPolytope& p, const Vector& x);
bool contains(const Zonotope& z, const Vector& x);
bool contains(const Ball& ball, const Vector& x);
bool contains(const ShiftedHBody& body, const Vector& x);
bool contains(const ConvexBody& body, const Vector& x);
bool contains(const MmcBody& body, const Vector& x);

Chord line_intersection(const HPolytope& p, const Vector& x, const Vector& v);
Chord line_intersection(const VPolytope& p, const Vector& x, const Vector& v);
Chord line_intersection(const Zonotope& z, const Vector& x, const Vector& v);
Chord line_intersection(const Ball& ball, const Vector& x, const Vector& v);
Chord line_intersection(const ShiftedHBody& body, const Vector& x, const Vector& v);
Chord line_intersection(const ConvexBody& body, const Vector& x, const Vector& v);
Chord line_intersection(const MmcBody& body, const Vector& x, const Vector& v);

// The boundary LPs of V-polytopes and zonotopes:
//   min / max alpha  s.t.  x + alpha v = sum_i lambda_i g_i
// with lambda in [-1, 1]^k (zonotope) or in the unit simplex (V-polytope).
// The max problem is warm-started from the basis of the min problem.
class BoundaryLp {
 public:
  Chord solve(const VPolytope& p, const Vector& x, const Vector& v);
  Chord solve(const Zonotope& z, const Vector& x, const Vector& v);

 private:
  Chord solve_pair();

  LpProblem problem_;
  SimplexSolver solver_;
  Eigen::Index num_points_ = -1;
};

struct ChebyshevBall {
  Vector center;
  double radius;
};

/// Deepest point of p and the radius of the largest inscribed ball there.
ChebyshevBall chebyshev_center(const HPolytope& p);

/// Ellipsoid { x : (x - c)^T E (x - c) <= 1 } containing every vertex.
struct Ellipsoid {
  Matrix shape;
  Vector center;
};

/// Khachiyan's iteration for the minimum-volume enclosing ellipsoid; stops once
/// the ellipsoid is (1 + tol)-approximate.
Ellipsoid enclosing_ellipsoid(const VPolytope& p, double tol = 0.01, int max_iterations = 100000);

struct RoundedVPolytope {
  VPolytope rounded;
  double log_det_map;  // log |det L| for the map x -> L (x - c)
  Matrix map;
  Vector shift;
};

/// Maps p so that its enclosing ellipsoid becomes the unit ball;
/// vol(p) = vol(rounded) / exp(log_det_map).
RoundedVPolytope round_vpolytope(const VPolytope& p, double tol = 0.01);

/// Centrally symmetric H-body inside the zonotope: the hypercube section
/// {y in [-1,1]^k : y in row space of G} mapped into R^d. Returned with
/// b_min = b0 = 1 and b_max from b_max_offsets, t = 0.
ShiftedHBody zonotope_to_hbody(const Zonotope& z);

/// Support values of the zonotope along the rows of `normals`:
/// b_l = sum_j |(normals G)_lj|.
Vector b_max_offsets(const Matrix& normals, const Zonotope& z);

/// Starting point of every random walk: the Chebyshev center for H-polytopes,
/// the origin for zonotopes, the enclosing-ellipsoid center for V-polytopes.
Vector interior_point(const ConvexBody& body);

}  // namespace polyvol
