#include <doctest.h>

#include "checks.hpp"

#include <polyvol/oracle.hpp>

using namespace polyvol;

TEST_SUITE("gen") {

TEST_CASE("shape counts and membership") {
  CHECK(cube(2).num_facets() == 4);
  CHECK(cube_v(3).vertices.rows() == 8);
  CHECK(cross(3).vertices.rows() == 6);
  CHECK(simplex(4).vertices.rows() == 5);
  CHECK(simplex_h(4).num_facets() == 5);
  CHECK(contains(cube(3), Vector::Zero(3)));
  CHECK_FALSE(contains(cube(3), Vector(1.5 * Vector::Unit(3, 0))));
}

TEST_CASE("cross membership is the l1 ball") {
  RngStream rng(51);
  const VPolytope c = cross(4);
  for (int i = 0; i < 500; ++i) {
    Vector x(4);
    for (int j = 0; j < 4; ++j) x[j] = rng.uniform(-1.0, 1.0);
    const double l1 = x.lpNorm<1>();
    if (std::abs(l1 - 1.0) < 1e-6) continue;
    CHECK(contains(c, x) == (l1 <= 1.0));
  }
}

TEST_CASE("simplex vertices are affinely independent") {
  for (int d : {2, 5, 20}) {
    const Matrix v = simplex(d).vertices;
    const Matrix edges = v.bottomRows(d).rowwise() - v.row(0);
    CHECK(numeric_rank(svd(edges).singular_values) == d);
  }
  Matrix tri(3, 2);
  tri << 0, 0, 1, 0, 0, 1;
  CHECK((simplex(2).vertices - tri).norm() == 0.0);
}

TEST_CASE("random H-polytopes") {
  RngStream rng(52);
  for (auto [d, m] : {std::pair{2, 5}, std::pair{5, 12}, std::pair{10, 40}}) {
    const HPolytope p = rh(d, m, rng);
    CHECK(p.num_facets() == m);
    CHECK((p.a.rowwise().norm().array() - 1.0).abs().maxCoeff() <= 1e-12);
    CHECK((p.b.array() == 1.0).all());
    CHECK(is_bounded(p));
    CHECK(chebyshev_center(p).radius >= 1.0 - 1e-9);
    for (int i = 0; i < 200; ++i) CHECK(contains(p, Vector(0.999 * sample_unit_sphere(rng, d))));
  }
  Matrix a(2, 2);
  a << 1, 0, 0, 1;
  CHECK_FALSE(is_bounded(HPolytope(a, Vector::Ones(2))));
}

TEST_CASE("random V-polytopes") {
  RngStream rng(53);
  const VPolytope p = rv(6, 40, rng);
  CHECK(p.vertices.rows() == 40);
  CHECK((p.vertices.rowwise().norm().array() - 1.0).abs().maxCoeff() <= 1e-12);
  for (int i = 0; i < 200; ++i) CHECK_FALSE(contains(p, Vector(1.001 * sample_unit_sphere(rng, 6))));

  const VPolytope disk = rv(2, 400, rng);
  std::vector<Eigen::Vector2d> pts;
  for (Eigen::Index i = 0; i < disk.vertices.rows(); ++i) pts.emplace_back(disk.vertices(i, 0), disk.vertices(i, 1));
  const double area = checks::shoelace(checks::convex_hull(pts));
  CHECK(std::abs(area / std::numbers::pi - 1.0) <= 0.05);
}

TEST_CASE("random zonotopes") {
  RngStream rng(54);
  for (auto [d, k] : {std::pair{2, 3}, std::pair{5, 10}, std::pair{10, 50}}) {
    const Zonotope z = zono(d, k, rng);
    CHECK(z.num_generators() == k);
    CHECK(z.generators.colwise().norm().maxCoeff() <= std::sqrt(d));
    CHECK(numeric_rank(svd(z.generators).singular_values) == d);
  }
  for (int t = 0; t < 10; ++t) {
    const Zonotope z = zono(2, 3, rng);
    const double area = checks::shoelace(checks::zonotope_vertices_2d(z.generators));
    CHECK(std::exp(exact_zonotope(z)) == doctest::Approx(area).epsilon(1e-10));
  }
}

TEST_CASE("generators are deterministic") {
  RngStream a(7), b(7);
  CHECK(rh(4, 10, a).a == rh(4, 10, b).a);
  CHECK(rv(4, 10, a).vertices == rv(4, 10, b).vertices);
  CHECK(zono(4, 10, a).generators == zono(4, 10, b).generators);
  RngStream c(8);
  CHECK(zono(4, 10, c).generators != zono(4, 10, a).generators);
}

}
