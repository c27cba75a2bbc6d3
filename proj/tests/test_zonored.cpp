#include <doctest.h>

#include "checks.hpp"

#include <polyvol/oracle.hpp>
#include <polyvol/zonored.hpp>

using namespace polyvol;

namespace {

Matrix rotation2(double angle) {
  Matrix q(2, 2);
  q << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  return q;
}

Matrix random_orthogonal(int d, RngStream& rng) {
  Eigen::HouseholderQR<Matrix> qr(checks::random_matrix(d, d, rng));
  return qr.householderQ();
}

}  // namespace

TEST_SUITE("zonored") {

TEST_CASE("interval hull") {
  Matrix h(2, 3);
  h << 1, -2, 0.5, -3, 4, 0;
  const Matrix ih = interval_hull(h);
  Matrix expected = Matrix::Zero(2, 2);
  expected.diagonal() << 3.5, 7.0;
  CHECK((ih - expected).norm() == 0.0);
  CHECK((interval_hull(Matrix::Identity(3, 3)) - Matrix::Identity(3, 3)).norm() == 0.0);
}

TEST_CASE("parallelotope volumes") {
  CHECK(parallelotope_volume_log(Matrix::Identity(2, 2)) == doctest::Approx(std::log(4.0)));
  Matrix g = Matrix::Zero(2, 2);
  g.diagonal() << 2.0, 3.0;
  CHECK(parallelotope_volume_log(g) == doctest::Approx(std::log(24.0)));
  CHECK(std::isinf(parallelotope_volume_log(Matrix::Ones(2, 2))));

  RngStream rng(41);
  for (int t = 0; t < 20; ++t) {
    const Matrix a = checks::random_matrix(3, 3, rng);
    CHECK(std::abs(parallelotope_volume_log(a) - exact_zonotope(Zonotope(a))) <= 1e-9);
  }
}

TEST_CASE("reduction of a parallelotope is exact") {
  Matrix g = Matrix::Zero(2, 2);
  g.diagonal() << 2.0, 3.0;
  const ReducedZonotope axis = pca_reduce(Zonotope(g));
  CHECK(std::abs(parallelotope_volume_log(axis.g_red) - std::log(24.0)) <= 1e-9);

  const Matrix rotated = rotation2(std::numbers::pi / 6) * g;
  const ReducedZonotope r = pca_reduce(Zonotope(rotated));
  const double ratio = std::exp((parallelotope_volume_log(r.g_red) - std::log(24.0)) / 2.0);
  CHECK(std::abs(ratio - 1.0) <= 0.05);
}

TEST_CASE("reduced parallelotope contains the zonotope") {
  RngStream rng(42);
  for (auto [d, k] : {std::pair{3, 7}, std::pair{5, 12}, std::pair{6, 30}}) {
    const Zonotope z = zono(d, k, rng);
    const Matrix inv = pca_reduce(z).g_red.inverse();
    double worst = 0.0;
    Vector lambda(k);
    for (int s = 0; s < 10000; ++s) {
      const bool vertex = s % 2 == 0;
      for (int j = 0; j < k; ++j) lambda[j] = vertex ? (rng.uniform() < 0.5 ? -1.0 : 1.0) : rng.uniform(-1.0, 1.0);
      worst = std::max(worst, (inv * (z.generators * lambda)).lpNorm<Eigen::Infinity>());
    }
    CHECK(worst <= 1.0 + 1e-9);
  }
}

TEST_CASE("fitness") {
  VolumeConfig cfg;
  cfg.seed = 2;
  Matrix g = Matrix::Zero(2, 2);
  g.diagonal() << 2.0, 3.0;
  const Fitness par = fitness(Zonotope(rotation2(0.4) * g), cfg);
  CHECK(std::abs(par.r - 1.0) <= 0.1);
  CHECK(par.r == doctest::Approx(std::exp((par.vol_red_log - par.vol_p_log) / 2.0)));

  RngStream rng(43);
  for (int t = 0; t < 4; ++t) {
    const Zonotope z = zono(4, 8 + 2 * t, rng);
    cfg.seed = 10 + t;
    const Fitness f = fitness(z, cfg);
    CHECK(f.r >= 1.0 - 2.0 * cfg.epsilon);
    CHECK(f.vol_p_log == f.report.log_volume);
  }
}

TEST_CASE("fitness rotates with the generators") {
  RngStream rng(44);
  for (int t = 0; t < 3; ++t) {
    const Zonotope z = zono(4, 9, rng);
    const Matrix q = random_orthogonal(4, rng);
    VolumeConfig cfg;
    cfg.seed = 20 + t;
    const double a = fitness(z, cfg).r;
    const double b = fitness(Zonotope(q * z.generators), cfg).r;
    CHECK(std::abs(a - b) <= 0.1);
  }
}

}
