#include "polyvol/gen.hpp"

#include <cmath>

#include "polyvol/lp.hpp"
#include "polyvol/sampling.hpp"

namespace polyvol {

namespace {

void check_dim(int d) {
  if (d < 1) throw std::invalid_argument("generator: d must be >= 1");
}

}  // namespace

HPolytope cube(int d) {
  check_dim(d);
  Matrix a(2 * d, d);
  a.topRows(d).setIdentity();
  a.bottomRows(d) = -Matrix::Identity(d, d);
  return HPolytope(a, Vector::Ones(2 * d));
}

VPolytope cube_v(int d) {
  check_dim(d);
  if (d > 24) throw std::invalid_argument("cube_v: too many vertices");
  const Eigen::Index n = Eigen::Index{1} << d;
  Matrix v(n, d);
  for (Eigen::Index i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) v(i, j) = (i >> j) & 1 ? 1.0 : -1.0;
  return VPolytope(v);
}

VPolytope cross(int d) {
  check_dim(d);
  Matrix v(2 * d, d);
  v.topRows(d).setIdentity();
  v.bottomRows(d) = -Matrix::Identity(d, d);
  return VPolytope(v);
}

VPolytope simplex(int d) {
  check_dim(d);
  Matrix v = Matrix::Zero(d + 1, d);
  v.bottomRows(d).setIdentity();
  return VPolytope(v);
}

HPolytope simplex_h(int d) {
  check_dim(d);
  Matrix a(d + 1, d);
  a.topRows(d) = -Matrix::Identity(d, d);
  a.row(d).setOnes();
  Vector b = Vector::Zero(d + 1);
  b[d] = 1.0;
  return HPolytope(a, b);
}

bool is_bounded(const HPolytope& p) {
  // a x + s = b, s >= 0, x free; optimize each coordinate both ways.
  const int d = p.dim();
  const auto q = p.num_facets();
  LpProblem lp;
  lp.a_eq = Matrix::Zero(q, d + q);
  lp.a_eq.leftCols(d) = p.a;
  lp.a_eq.rightCols(q).setIdentity();
  lp.b_eq = p.b;
  lp.lower = Vector::Zero(d + q);
  lp.lower.head(d).setConstant(-kInf);
  lp.upper = Vector::Constant(d + q, kInf);
  SimplexSolver solver;
  for (int i = 0; i < d; ++i) {
    for (double sign : {1.0, -1.0}) {
      lp.objective = Vector::Zero(d + q);
      lp.objective[i] = sign;
      const LpSolution sol = solver.solve(lp);
      if (sol.status == LpStatus::infeasible) throw std::invalid_argument("is_bounded: empty polytope");
      if (sol.status == LpStatus::unbounded) return false;
    }
  }
  return true;
}

HPolytope rh(int d, int m, RngStream& rng) {
  check_dim(d);
  if (m <= d) throw std::invalid_argument("rh: need more than d facets");
  for (int attempt = 0; attempt < 100; ++attempt) {
    Matrix a(m, d);
    for (int i = 0; i < m; ++i) a.row(i) = sample_unit_sphere(rng, d).transpose();
    HPolytope p(a, Vector::Ones(m));
    if (is_bounded(p)) return p;
  }
  throw std::runtime_error("rh: no bounded polytope after 100 attempts");
}

VPolytope rv(int d, int n, RngStream& rng) {
  check_dim(d);
  if (n <= d) throw std::invalid_argument("rv: need more than d vertices");
  Matrix v(n, d);
  for (int i = 0; i < n; ++i) v.row(i) = sample_unit_sphere(rng, d).transpose();
  return VPolytope(v);
}

Zonotope zono(int d, int k, RngStream& rng) {
  check_dim(d);
  if (k < d) throw std::invalid_argument("zono: need k >= d");
  Matrix g(d, k);
  const double max_len = std::sqrt(static_cast<double>(d));
  for (int j = 0; j < k; ++j) g.col(j) = rng.uniform(0.0, max_len) * sample_unit_sphere(rng, d);
  return Zonotope(g);
}

}  // namespace polyvol
