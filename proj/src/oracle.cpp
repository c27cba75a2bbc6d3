#include "polyvol/oracle.hpp"

#include <cmath>
#include <functional>
#include <vector>

namespace polyvol {

double exact_cube(int d) { return d * std::log(2.0); }

double exact_cross(int d) { return d * std::log(2.0) - std::lgamma(d + 1.0); }

double exact_simplex(int d) { return -std::lgamma(d + 1.0); }

double exact_zonotope(const Zonotope& z) {
  const int d = z.dim();
  const int k = z.num_generators();
  const double subsets = std::exp(std::lgamma(k + 1.0) - std::lgamma(d + 1.0) - std::lgamma(k - d + 1.0));
  if (subsets > 1e6 + 0.5) throw std::invalid_argument("exact_zonotope: too many generator subsets");

  std::vector<int> idx(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) idx[static_cast<std::size_t>(i)] = i;
  Matrix sub(d, d);
  double total = 0.0;
  for (;;) {
    for (int i = 0; i < d; ++i) sub.col(i) = z.generators.col(idx[static_cast<std::size_t>(i)]);
    total += std::abs(lu_determinant(sub));
    int i = d - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == k - d + i) --i;
    if (i < 0) break;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < d; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j) - 1] + 1;
  }
  return d * std::log(2.0) + std::log(total);
}

McEstimate mc_rejection(const std::function<bool(const Vector&)>& inside, const Vector& lo, const Vector& hi,
                        std::int64_t n, RngStream& rng) {
  const auto d = lo.size();
  if (hi.size() != d || d < 1 || n < 1) throw std::invalid_argument("mc_rejection: bad box or sample size");
  if (((hi - lo).array() <= 0.0).any()) throw std::invalid_argument("mc_rejection: empty box");
  const double box = (hi - lo).prod();
  Vector x(d);
  std::int64_t hits = 0;
  for (std::int64_t s = 0; s < n; ++s) {
    for (Eigen::Index i = 0; i < d; ++i) x[i] = rng.uniform(lo[i], hi[i]);
    if (inside(x)) ++hits;
  }
  const double f = static_cast<double>(hits) / static_cast<double>(n);
  return {box * f, box * std::sqrt(f * (1.0 - f) / static_cast<double>(n))};
}

McEstimate mc_rejection(const ConvexBody& body, const Vector& lo, const Vector& hi, std::int64_t n, RngStream& rng) {
  if (lo.size() != dimension(body)) throw std::invalid_argument("mc_rejection: bad box or sample size");
  return mc_rejection([&](const Vector& x) { return contains(body, x); }, lo, hi, n, rng);
}

}  // namespace polyvol
