#include "polyvol/bodies.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace polyvol {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

SimplexSolver& thread_solver() {
  thread_local SimplexSolver solver;
  return solver;
}

void require_direction(const Vector& v) {
  if (!(v.squaredNorm() > 0.0)) throw std::invalid_argument("line_intersection: zero direction");
}

// Chord of { y : a y <= offsets } through x along v.
Chord halfspace_chord(const Matrix& a, const Vector& offsets, const Vector& x, const Vector& v) {
  const Vector slack = offsets - a * x;
  const Vector av = a * v;
  Chord c{-kInf, kInf};
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    if (slack[i] < -kMembershipTol) throw std::invalid_argument("line_intersection: point outside the body");
    const double s = std::max(slack[i], 0.0);
    if (av[i] > 0.0)
      c.hi = std::min(c.hi, s / av[i]);
    else if (av[i] < 0.0)
      c.lo = std::max(c.lo, s / av[i]);
  }
  if (!std::isfinite(c.lo) || !std::isfinite(c.hi)) throw NumericError("line_intersection: unbounded chord");
  return c;
}

int affine_rank(const Matrix& rows) {
  if (rows.rows() < 2) return 0;
  const Matrix centered = rows.bottomRows(rows.rows() - 1).rowwise() - rows.row(0);
  Eigen::FullPivLU<Matrix> lu(centered);
  lu.setThreshold(1e-10);
  return static_cast<int>(lu.rank());
}

}  // namespace

HPolytope::HPolytope(Matrix a_in, Vector b_in) : a(std::move(a_in)), b(std::move(b_in)) {
  if (a.rows() != b.size()) throw std::invalid_argument("HPolytope: a and b disagree on the number of facets");
  if (a.cols() < 1) throw std::invalid_argument("HPolytope: dimension must be positive");
  if (!a.allFinite() || !b.allFinite()) throw std::invalid_argument("HPolytope: non-finite entries");
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    if (a.row(i).squaredNorm() == 0.0) throw std::invalid_argument("HPolytope: all-zero facet normal");
}

VPolytope::VPolytope(Matrix v) : vertices(std::move(v)) {
  const auto d = vertices.cols();
  if (d < 1) throw std::invalid_argument("VPolytope: dimension must be positive");
  if (vertices.rows() < d + 1) throw std::invalid_argument("VPolytope: need at least d + 1 vertices");
  if (!vertices.allFinite()) throw std::invalid_argument("VPolytope: non-finite entries");
  const int rank = affine_rank(vertices);
  if (rank != d) {
    std::ostringstream msg;
    msg << "VPolytope: vertices span an affine space of dimension " << rank << " < " << d;
    throw std::invalid_argument(msg.str());
  }
}

Zonotope::Zonotope(Matrix g) : generators(std::move(g)) {
  const auto d = generators.rows();
  if (d < 1) throw std::invalid_argument("Zonotope: dimension must be positive");
  if (generators.cols() < d) throw std::invalid_argument("Zonotope: need at least d generators");
  if (!generators.allFinite()) throw std::invalid_argument("Zonotope: non-finite entries");
  Eigen::FullPivLU<Matrix> lu(generators);
  lu.setThreshold(1e-10);
  if (lu.rank() != d) throw std::invalid_argument("Zonotope: generators do not span R^d");
}

Ball::Ball(Vector c, double r) : center(std::move(c)), radius(r) {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw std::invalid_argument("Ball: radius must be positive");
}

int dimension(const ConvexBody& body) {
  return std::visit([](const auto& b) { return b.dim(); }, body);
}

int dimension(const MmcBody& body) {
  return std::visit([](const auto& b) { return b.dim(); }, body);
}

std::string representation_name(const ConvexBody& body) {
  return std::visit(overloaded{[](const HPolytope&) { return std::string("h"); },
                               [](const VPolytope&) { return std::string("v"); },
                               [](const Zonotope&) { return std::string("z"); },
                               [](const Ball&) { return std::string("ball"); }},
                    body);
}

bool contains(const HPolytope& p, const Vector& x) {
  return ((p.a * x - p.b).array() <= kMembershipTol).all();
}

bool contains(const VPolytope& p, const Vector& x) {
  // max z^T x - z0  s.t.  z^T v_i - z0 <= 0,  z^T x - z0 <= 1.
  // A strictly positive optimum is a separating hyperplane.
  const auto d = p.dim();
  const auto nv = p.num_vertices();
  const Eigen::Index rows = nv + 1;
  const Eigen::Index cols = d + 1 + rows;
  LpProblem lp;
  lp.a_eq = Matrix::Zero(rows, cols);
  lp.a_eq.topLeftCorner(nv, d) = p.vertices;
  lp.a_eq.block(nv, 0, 1, d) = x.transpose();
  lp.a_eq.col(d).setConstant(-1.0);
  lp.a_eq.rightCols(rows).setIdentity();
  lp.b_eq = Vector::Zero(rows);
  lp.b_eq[nv] = 1.0;
  lp.objective = Vector::Zero(cols);
  lp.objective.head(d) = -x;
  lp.objective[d] = 1.0;
  lp.lower = Vector::Constant(cols, -kInf);
  lp.upper = Vector::Constant(cols, kInf);
  lp.lower.tail(rows).setZero();

  const LpSolution sol = thread_solver().solve(lp);
  if (sol.status != LpStatus::optimal) throw NumericError("V-membership LP did not reach an optimum");
  return -sol.objective_value <= kMembershipTol;
}

bool contains(const Zonotope& z, const Vector& x) {
  const auto k = z.num_generators();
  LpProblem lp;
  lp.a_eq = z.generators;
  lp.b_eq = x;
  lp.objective = Vector::Zero(k);
  lp.lower = Vector::Constant(k, -1.0);
  lp.upper = Vector::Constant(k, 1.0);
  const LpSolution sol = thread_solver().solve(lp);
  if (sol.status == LpStatus::unbounded) throw NumericError("Z-membership LP reported unbounded");
  return sol.status == LpStatus::optimal;
}

bool contains(const Ball& ball, const Vector& x) {
  return (x - ball.center).norm() <= ball.radius + kMembershipTol;
}

bool contains(const ShiftedHBody& body, const Vector& x) {
  const Vector ax = (*body.normals) * x;
  for (Eigen::Index i = 0; i < ax.size(); ++i)
    if (ax[i] > body.offset(i) + kMembershipTol) return false;
  return true;
}

bool contains(const ConvexBody& body, const Vector& x) {
  return std::visit([&](const auto& b) { return contains(b, x); }, body);
}

bool contains(const MmcBody& body, const Vector& x) {
  return std::visit([&](const auto& b) { return contains(b, x); }, body);
}

Chord line_intersection(const HPolytope& p, const Vector& x, const Vector& v) {
  require_direction(v);
  return halfspace_chord(p.a, p.b, x, v);
}

Chord line_intersection(const ShiftedHBody& body, const Vector& x, const Vector& v) {
  require_direction(v);
  return halfspace_chord(*body.normals, body.offsets(), x, v);
}

Chord line_intersection(const Ball& ball, const Vector& x, const Vector& v) {
  require_direction(v);
  const Vector w = x - ball.center;
  const double a = v.squaredNorm();
  const double b = w.dot(v);
  const double c = w.squaredNorm() - ball.radius * ball.radius;
  if (c > 2.0 * kMembershipTol * ball.radius) throw std::invalid_argument("line_intersection: point outside the ball");
  const double disc = std::sqrt(std::max(b * b - a * c, 0.0));
  // Stable roots of a t^2 + 2 b t + c = 0.
  const double q = b >= 0.0 ? -(b + disc) : -(b - disc);
  double t1 = q / a;
  double t2 = q != 0.0 ? c / q : -t1;
  if (t1 > t2) std::swap(t1, t2);
  return Chord{std::min(t1, 0.0), std::max(t2, 0.0)};
}

Chord line_intersection(const VPolytope& p, const Vector& x, const Vector& v) {
  require_direction(v);
  thread_local BoundaryLp lp;
  return lp.solve(p, x, v);
}

Chord line_intersection(const Zonotope& z, const Vector& x, const Vector& v) {
  require_direction(v);
  thread_local BoundaryLp lp;
  return lp.solve(z, x, v);
}

Chord line_intersection(const ConvexBody& body, const Vector& x, const Vector& v) {
  return std::visit([&](const auto& b) { return line_intersection(b, x, v); }, body);
}

Chord line_intersection(const MmcBody& body, const Vector& x, const Vector& v) {
  return std::visit([&](const auto& b) { return line_intersection(b, x, v); }, body);
}

Chord BoundaryLp::solve(const VPolytope& p, const Vector& x, const Vector& v) {
  const auto d = p.dim();
  const auto nv = p.num_vertices();
  if (num_points_ != nv || problem_.a_eq.rows() != d + 1) {
    problem_.a_eq = Matrix::Zero(d + 1, nv + 1);
    problem_.a_eq.topLeftCorner(d, nv) = p.vertices.transpose();
    problem_.a_eq.block(d, 0, 1, nv).setOnes();
    problem_.objective = Vector::Zero(nv + 1);
    problem_.objective[nv] = 1.0;
    problem_.lower = Vector::Zero(nv + 1);
    problem_.upper = Vector::Ones(nv + 1);
    problem_.lower[nv] = -kInf;
    problem_.upper[nv] = kInf;
    problem_.b_eq.resize(d + 1);
    num_points_ = nv;
  } else {
    problem_.a_eq.topLeftCorner(d, nv) = p.vertices.transpose();
  }
  problem_.a_eq.block(0, nv, d, 1) = -v;
  problem_.a_eq(d, nv) = 0.0;
  problem_.b_eq.head(d) = x;
  problem_.b_eq[d] = 1.0;
  return solve_pair();
}

Chord BoundaryLp::solve(const Zonotope& z, const Vector& x, const Vector& v) {
  const auto d = z.dim();
  const auto k = z.num_generators();
  if (num_points_ != k || problem_.a_eq.rows() != d) {
    problem_.a_eq.resize(d, k + 1);
    problem_.objective = Vector::Zero(k + 1);
    problem_.objective[k] = 1.0;
    problem_.lower = Vector::Constant(k + 1, -1.0);
    problem_.upper = Vector::Constant(k + 1, 1.0);
    problem_.lower[k] = -kInf;
    problem_.upper[k] = kInf;
    num_points_ = k;
  }
  problem_.a_eq.leftCols(k) = z.generators;
  problem_.a_eq.col(k) = -v;
  problem_.b_eq = x;
  return solve_pair();
}

Chord BoundaryLp::solve_pair() {
  const auto alpha = problem_.num_vars() - 1;
  const LpSolution lo = solver_.solve(problem_);
  if (lo.status == LpStatus::infeasible) throw std::invalid_argument("line_intersection: point outside the body");
  if (lo.status == LpStatus::unbounded) throw NumericError("line_intersection: unbounded chord");
  const LpSolution hi = solver_.resolve_negated(problem_, lo);
  if (hi.status != LpStatus::optimal) throw NumericError("line_intersection: unbounded chord");
  return Chord{std::min(lo.point[alpha], 0.0), std::max(hi.point[alpha], 0.0)};
}

ChebyshevBall chebyshev_center(const HPolytope& p) {
  // max R  s.t.  a_i x + ||a_i|| R + s_i = b_i,  R >= 0, s >= 0.
  const auto d = p.dim();
  const auto q = p.num_facets();
  const Eigen::Index cols = d + 1 + q;
  LpProblem lp;
  lp.a_eq = Matrix::Zero(q, cols);
  lp.a_eq.leftCols(d) = p.a;
  lp.a_eq.col(d) = p.a.rowwise().norm();
  lp.a_eq.rightCols(q).setIdentity();
  lp.b_eq = p.b;
  lp.objective = Vector::Zero(cols);
  lp.objective[d] = -1.0;
  lp.lower = Vector::Zero(cols);
  lp.upper = Vector::Constant(cols, kInf);
  lp.lower.head(d).setConstant(-kInf);

  const LpSolution sol = thread_solver().solve(lp);
  if (sol.status == LpStatus::infeasible) throw std::invalid_argument("chebyshev_center: empty polytope");
  if (sol.status == LpStatus::unbounded) throw std::invalid_argument("chebyshev_center: unbounded");
  const Vector center = sol.point.head(d);
  const Vector slack = (p.b - p.a * center).cwiseQuotient(p.a.rowwise().norm());
  return ChebyshevBall{center, slack.minCoeff()};
}

Ellipsoid enclosing_ellipsoid(const VPolytope& p, double tol, int max_iterations) {
  const auto d = p.dim();
  const auto n = p.num_vertices();
  const Matrix pts = p.vertices.transpose();  // d x n
  Matrix lifted(d + 1, n);
  lifted.topRows(d) = pts;
  lifted.row(d).setOnes();

  {
    Eigen::FullPivLU<Matrix> lu(lifted);
    lu.setThreshold(1e-10);
    if (lu.rank() != d + 1) {
      std::ostringstream msg;
      msg << "enclosing_ellipsoid: vertices have affine rank " << lu.rank() - 1 << " < " << d;
      throw NumericError(msg.str());
    }
  }

  Vector u = Vector::Constant(n, 1.0 / static_cast<double>(n));
  const double target = (1.0 + tol) * static_cast<double>(d + 1);
  for (int it = 0; it < max_iterations; ++it) {
    const Matrix x = lifted * u.asDiagonal() * lifted.transpose();
    const Matrix solved = x.ldlt().solve(lifted);
    const Vector m = (lifted.cwiseProduct(solved)).colwise().sum().transpose();
    Eigen::Index j;
    const double max_m = m.maxCoeff(&j);
    if (max_m <= target) break;
    const double step = (max_m - d - 1.0) / ((d + 1.0) * (max_m - 1.0));
    u *= (1.0 - step);
    u[j] += step;
  }

  Vector center = pts * u;
  const Matrix spread = pts * u.asDiagonal() * pts.transpose() - center * center.transpose();
  Matrix shape = spread.ldlt().solve(Matrix::Identity(d, d)) / static_cast<double>(d);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vector w = pts.col(i) - center;
    worst = std::max(worst, w.dot(shape * w));
  }
  if (!(worst > 0.0) || !std::isfinite(worst)) throw NumericError("enclosing_ellipsoid: degenerate shape matrix");
  shape /= worst;
  return Ellipsoid{shape, center};
}

RoundedVPolytope round_vpolytope(const VPolytope& p, double tol) {
  const Ellipsoid e = enclosing_ellipsoid(p, tol);
  Eigen::LLT<Matrix> llt(e.shape);
  if (llt.info() != Eigen::Success) throw NumericError("round_vpolytope: ellipsoid shape is not positive definite");
  const Matrix lower = llt.matrixL();
  const Matrix map = lower.transpose();
  double log_det = 0.0;
  for (Eigen::Index i = 0; i < lower.rows(); ++i) log_det += std::log(lower(i, i));
  Matrix rounded = (p.vertices.rowwise() - e.center.transpose()) * lower;
  return RoundedVPolytope{VPolytope(std::move(rounded)), log_det, map, e.center};
}

Vector b_max_offsets(const Matrix& normals, const Zonotope& z) {
  if (normals.cols() != z.dim()) throw std::invalid_argument("b_max_offsets: dimension mismatch");
  return (normals * z.generators).cwiseAbs().rowwise().sum();
}

ShiftedHBody zonotope_to_hbody(const Zonotope& z) {
  const auto d = z.dim();
  const auto k = z.num_generators();
  if (k <= d) throw std::invalid_argument("zonotope_to_hbody: needs more generators than dimensions");

  const Matrix gram = z.generators.transpose() * z.generators;
  const SvdResult gram_svd = svd(gram);
  const int rank = numeric_rank(gram_svd.singular_values);
  if (rank != d) {
    std::ostringstream msg;
    msg << "zonotope_to_hbody: G^T G has rank " << rank << ", expected " << d;
    throw NumericError(msg.str());
  }
  const Matrix kernel = gram_svd.v.rightCols(k - d);          // Q, k x (k - d)
  const Matrix complement = null_space_complement(kernel);    // W_perp, d x k
  const Matrix wt = complement.transpose();                   // k x d
  const Matrix gw = z.generators * wt;                        // d x d

  Eigen::FullPivLU<Matrix> lu(gw);
  if (!lu.isInvertible()) throw NumericError("zonotope_to_hbody: G W_perp^T is singular");
  const Matrix gw_inv = lu.inverse();

  auto normals = std::make_shared<Matrix>(2 * k, d);
  normals->topRows(k) = wt * gw_inv;
  normals->bottomRows(k) = -(wt * gw_inv);

  ShiftedHBody body;
  body.normals = normals;
  body.b0 = Vector::Ones(2 * k);
  body.b_min = body.b0;
  body.b_max = b_max_offsets(*normals, z).cwiseMax(body.b0);
  body.t = 0.0;
  return body;
}

Vector interior_point(const ConvexBody& body) {
  return std::visit(overloaded{[](const HPolytope& p) { return chebyshev_center(p).center; },
                               [](const VPolytope& p) { return enclosing_ellipsoid(p).center; },
                               [](const Zonotope& z) { return Vector(Vector::Zero(z.dim())); },
                               [](const Ball& b) { return b.center; }},
                    body);
}

}  // namespace polyvol
