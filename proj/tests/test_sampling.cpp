#include <doctest.h>

#include "checks.hpp"

#include <polyvol/sampling.hpp>

using namespace polyvol;

TEST_SUITE("sampling") {

TEST_CASE("rng streams are reproducible") {
  RngStream a(99), b(99), c(100);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const std::uint64_t x = a.next_u64();
    CHECK(x == b.next_u64());
    differs = differs || x != c.next_u64();
  }
  CHECK(differs);
  CHECK(derive_seed(5, 0) != derive_seed(5, 1));
  CHECK(derive_seed(5, 1) == derive_seed(5, 1));

  RngStream u(1);
  double lo = 1.0, hi = 0.0, mean = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double x = u.uniform();
    lo = std::min(lo, x);
    hi = std::max(hi, x);
    mean += x;
  }
  CHECK(lo >= 0.0);
  CHECK(hi < 1.0);
  CHECK(mean / 100000 == doctest::Approx(0.5).epsilon(0.01));
  for (int i = 0; i < 1000; ++i) CHECK(u.index(7) < 7);
}

TEST_CASE("normal draws have unit variance") {
  RngStream rng(2);
  double s = 0.0, s2 = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    s += x;
    s2 += x * x;
  }
  CHECK(std::abs(s / n) < 0.01);
  CHECK(s2 / n == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("unit sphere") {
  RngStream rng(3);
  int plus = 0;
  for (int i = 0; i < 10000; ++i) {
    const Vector v = sample_unit_sphere(rng, 1);
    CHECK(std::abs(std::abs(v[0]) - 1.0) < 1e-12);
    plus += v[0] > 0;
  }
  CHECK(std::abs(plus / 10000.0 - 0.5) <= 0.02);

  Vector mean = Vector::Zero(3);
  for (int i = 0; i < 10000; ++i) {
    const Vector v = sample_unit_sphere(rng, 3);
    CHECK(std::abs(v.norm() - 1.0) < 1e-12);
    mean += v;
  }
  CHECK((mean / 10000.0).cwiseAbs().maxCoeff() <= 0.02);
}

TEST_CASE("uniform ball") {
  RngStream rng(4);
  const Ball unit(Vector::Zero(2), 1.0);
  int inner = 0;
  for (int i = 0; i < 10000; ++i) {
    const Vector x = sample_ball(rng, unit);
    CHECK(x.norm() <= 1.0);
    inner += x.norm() <= 1.0 / std::sqrt(2.0);
  }
  CHECK(std::abs(inner / 10000.0 - 0.5) <= 0.02);

  const Ball shifted(Vector::Constant(3, 5.0), 0.5);
  for (int i = 0; i < 1000; ++i) CHECK((sample_ball(rng, shifted) - shifted.center).norm() <= 0.5);
}

TEST_CASE("one-dimensional ball passes Kolmogorov-Smirnov") {
  RngStream rng(5);
  const double r = 3.0;
  std::vector<double> xs;
  for (int i = 0; i < 5000; ++i) xs.push_back(sample_ball(rng, Ball(Vector::Zero(1), r))[0]);
  std::sort(xs.begin(), xs.end());
  double dstat = 0.0;
  const double n = static_cast<double>(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double cdf = (xs[i] + r) / (2 * r);
    dstat = std::max({dstat, std::abs(cdf - i / n), std::abs(cdf - (i + 1) / n)});
  }
  CHECK(dstat < 1.63 / std::sqrt(n));  // 1% critical value
}

TEST_CASE("coordinate walk on the cube") {
  const ConvexBody c3 = cube(3);
  const WalkConfig cdhr{WalkMode::cdhr, 1};
  RngStream rng(6);
  Vector x = Vector::Zero(3);
  for (int i = 0; i < 10000; ++i) {
    const Vector y = hnr_step(Region{&c3, nullptr}, x, cdhr, rng);
    CHECK(contains(c3, y));
    int moved = 0;
    for (int j = 0; j < 3; ++j) moved += y[j] != x[j];
    CHECK(moved == 1);
    x = y;
  }

  const ConvexBody c2 = cube(2);
  HitAndRun chain(Region{&c2, nullptr}, Vector::Zero(2), cdhr);
  Vector mean = Vector::Zero(2);
  for (int i = 0; i < 100000; ++i) mean += chain.next(rng);
  CHECK((mean / 100000.0).cwiseAbs().maxCoeff() <= 0.02);
  CHECK(chain.steps() == 100000);
}

TEST_CASE("random direction walk fills the sub-box") {
  const ConvexBody c2 = cube(2);
  RngStream rng(7);
  HitAndRun chain(Region{&c2, nullptr}, Vector::Zero(2), WalkConfig{WalkMode::rdhr, 1});
  int inside = 0;
  for (int i = 0; i < 100000; ++i) inside += chain.next(rng).lpNorm<Eigen::Infinity>() <= 0.5;
  CHECK(std::abs(inside / 100000.0 - 0.25) <= 0.02);
}

TEST_CASE("walks on intersections stay feasible") {
  RngStream rng(8);
  const ConvexBody z = zono(3, 6, rng);
  const MmcBody ball = Ball(Vector::Zero(3), 0.8);
  const ConvexBody v = cross(4);
  ShiftedHBody hb = zonotope_to_hbody(std::get<Zonotope>(z));
  hb.t = 0.5;
  const MmcBody shifted = hb;
  for (WalkMode mode : {WalkMode::cdhr, WalkMode::rdhr}) {
    HitAndRun a(Region{&z, &ball}, Vector::Zero(3), WalkConfig{mode, 2});
    HitAndRun b(Region{&v, nullptr}, Vector::Zero(4), WalkConfig{mode, 1});
    HitAndRun c(Region{nullptr, &shifted}, Vector::Zero(3), WalkConfig{mode, 1});
    for (int i = 0; i < 500; ++i) {
      const Vector& x = a.next(rng);
      CHECK((contains(z, x) && contains(ball, x)));
      CHECK(contains(v, b.next(rng)));
      CHECK(contains(shifted, c.next(rng)));
    }
    CHECK(a.steps() == 1000);
  }
}

TEST_CASE("chains are deterministic") {
  const ConvexBody p = simplex_h(5);
  const Vector start = interior_point(p);
  RngStream r1(11), r2(11);
  HitAndRun a(Region{&p, nullptr}, start, WalkConfig{WalkMode::rdhr, 1});
  HitAndRun b(Region{&p, nullptr}, start, WalkConfig{WalkMode::rdhr, 1});
  for (int i = 0; i < 1000; ++i) CHECK(a.next(r1) == b.next(r2));
}

TEST_CASE("walk configuration is validated") {
  CHECK_THROWS(WalkConfig{WalkMode::cdhr, 0}.validate());
  const ConvexBody p = cube(2);
  Vector outside(2);
  outside << 2.0, 0.0;
  CHECK_THROWS(HitAndRun(Region{&p, nullptr}, outside, WalkConfig{}));
  CHECK_THROWS(Region{}.dim());
  CHECK(std::string(walk_name(WalkMode::cdhr)) == "cdhr");
}

}
