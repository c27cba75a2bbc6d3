#include <doctest.h>

#include "checks.hpp"

#include <polyvol/annealing.hpp>
#include <polyvol/sampling.hpp>

using namespace polyvol;

namespace {

// Replays a probe trace: every probe after the expansion stage must be the
// midpoint of the bracket implied by the earlier outcomes.
bool valid_bisection(const std::vector<ProbeRecord>& trace, std::size_t first, double top) {
  double lo = 0.0, hi = top;
  for (std::size_t i = first; i < trace.size(); ++i) {
    const ProbeRecord& p = trace[i];
    if (std::abs(p.s - 0.5 * (lo + hi)) > 1e-15 * top) return false;
    if (p.left && p.right) return i + 1 == trace.size();
    if (p.right) hi = p.s;
    else if (p.left) lo = p.s;
    else continue;
    if (hi - lo <= 1e-4 * top) lo = 0.0, hi = top;
  }
  return true;
}

// Initialization over a growing family: too_large means the body is too small.
bool valid_initialization(const std::vector<ProbeRecord>& trace) {
  double top = 1.0;
  std::size_t i = 0;
  for (; i < trace.size(); ++i) {
    if (trace[i].s != top) return false;
    if (trace[i].left && trace[i].right) return i + 1 == trace.size();
    if (trace[i].left) break;
    if (trace[i].right) top *= 2.0;
  }
  double lo = 0.0, hi = top;
  for (++i; i < trace.size(); ++i) {
    const ProbeRecord& p = trace[i];
    if (std::abs(p.s - 0.5 * (lo + hi)) > 1e-15 * top) return false;
    if (p.left && p.right) return i + 1 == trace.size();
    if (p.right) lo = p.s;
    else if (p.left) hi = p.s;
    else continue;
    if (hi - lo <= 1e-4 * top) lo = 0.0, hi = top;
  }
  return true;
}

double ball_radius(const MmcBody& b) { return std::get<Ball>(b).radius; }

}  // namespace

TEST_SUITE("annealing") {

TEST_CASE("t quantiles") {
  CHECK(std::abs(t_quantile(1000000, 0.05) - 1.644854) <= 2e-6);
  CHECK(std::abs(t_quantile(1, 0.25) - 1.0) <= 1e-9);
  CHECK(std::abs(t_quantile(9, 0.10) - 1.383029) <= 1e-6);
  CHECK(checks::t_quantile_max_error() <= 1e-6);
}

TEST_CASE("t-tests on constant ratios") {
  const std::vector<double> half(10, 0.5);
  CHECK(test_r(half, 0.1, 0.1));
  CHECK_FALSE(test_l(half, 0.1, 0.05, 0.1));
  const std::vector<double> inside(10, 0.12);
  CHECK(test_r(inside, 0.1, 0.1));
  CHECK(test_l(inside, 0.1, 0.05, 0.1));
  CHECK_THROWS(test_r(std::vector<double>{0.5}, 0.1, 0.1));
}

TEST_CASE("t-tests accept a ratio in the middle of the band") {
  RngStream rng(21);
  int both = 0;
  const int trials = 10000;
  for (int t = 0; t < trials; ++t) {
    std::vector<double> xs(10);
    for (double& x : xs) x = 0.125 + 0.01 * rng.normal();
    both += test_r(xs, 0.1, 0.1) && test_l(xs, 0.1, 0.05, 0.1);
  }
  CHECK(both >= 0.95 * trials);
}

TEST_CASE("small-count guard") {
  CoolingParams params;
  const std::vector<double> ratios(10, 0.05);
  // 120 * 0.05 * 0.95 < 10: the ratio is below r, so testR fails.
  TestOutcome out = run_tests(ratios, 0.05, 120, params);
  CHECK_FALSE(out.right);
  CHECK(out.verdict() == Verdict::too_small);
  out = run_tests(std::vector<double>(10, 0.97), 0.97, 120, params);
  CHECK_FALSE(out.left);
  CHECK(out.verdict() == Verdict::too_large);
  // Inside the band with too few points: neither test may succeed.
  out = run_tests(std::vector<double>(10, 0.12), 0.12, 50, params);
  CHECK(out.verdict() == Verdict::contradiction);
  out = run_tests(std::vector<double>(10, 0.12), 0.12, 1000, params);
  CHECK(out.verdict() == Verdict::accept);
}

TEST_CASE("sublists are interleaved") {
  std::vector<char> flags(20, 0);
  for (int j = 0; j < 20; j += 2) flags[j] = 1;
  const std::vector<double> r = sublist_ratios(flags, 2);
  CHECK(r[0] == 1.0);
  CHECK(r[1] == 0.0);
  CHECK_THROWS(sublist_ratios(std::vector<char>(7, 1), 2));
}

TEST_CASE("ratios from samples") {
  RngStream rng(22);
  const Ball outer(Vector::Zero(2), 1.0);
  std::vector<Vector> pts(1200);
  for (auto& x : pts) x = sample_ball(rng, outer);
  for (double r : ratios_from_sample(pts, MmcBody(outer), 10)) CHECK(r == 1.0);
  for (double r : ratios_from_sample(pts, MmcBody(Ball(Vector::Zero(2), 1e-9)), 10)) CHECK(r == 0.0);
  // The band 0.81 +- 0.03 is 2.7 binomial standard deviations at 1200 points.
  int close = 0;
  for (int rep = 0; rep < 200; ++rep) {
    for (auto& x : pts) x = sample_ball(rng, outer);
    const std::vector<double> r = ratios_from_sample(pts, MmcBody(Ball(Vector::Zero(2), 0.9)), 10);
    close += std::abs(std::accumulate(r.begin(), r.end(), 0.0) / 10 - 0.81) <= 0.03;
  }
  CHECK(close >= 196);
  for (double x : ratios_from_sample(pts, ConvexBody(cube(2)), 10)) CHECK(x == 1.0);
}

TEST_CASE("cooling parameters") {
  const CoolingParams p = CoolingParams::for_dimension(7);
  CHECK(p.hnr_sample_size() == 1300);
  CHECK(p.hnr_sample_size() % p.nu == 0);
  CHECK(CoolingParams::for_dimension(10).hnr_sample_size() == 1400);
  CHECK(p.exact_sample_size == 1200);
  CoolingParams bad;
  bad.delta = 0.95;
  CHECK_THROWS(bad.validate());
  bad = CoolingParams{};
  bad.nu = 1;
  CHECK_THROWS(bad.validate());
}

TEST_CASE("initial radius bounds") {
  RngStream rng(23);
  const ConvexBody p = Ball(Vector::Zero(5), 2.0);
  const auto [q_min, q_max] = initial_q_bounds(p, Vector::Zero(5), Vector::Zero(5), 1250, WalkConfig{}, rng);
  CHECK(q_min == 0.0);
  CHECK(q_max <= 2.0 + 1e-12);
  CHECK(q_max >= 1.5);
}

TEST_CASE("schedules for the cross and the cube need one phase") {
  RngStream rng(24);
  const ConvexBody cr = cross(20);
  const CoolingParams params = CoolingParams::for_dimension(20);
  const WalkConfig rdhr{WalkMode::rdhr, 1};
  auto [lo, hi] = initial_q_bounds(cr, Vector::Zero(20), Vector::Zero(20), params.hnr_sample_size(), rdhr, rng);
  ScheduleResult s = anneal(cr, Ball(Vector::Zero(20), 1.0), params, lo, hi, rdhr, rng);
  CHECK(s.phase_count == 1);

  const ConvexBody cu = cube(20);
  const WalkConfig cdhr{WalkMode::cdhr, 1};
  std::tie(lo, hi) = initial_q_bounds(cu, Vector::Zero(20), Vector::Zero(20), params.hnr_sample_size(), cdhr, rng);
  s = anneal(cu, Ball(Vector::Zero(20), 1.0), params, lo, hi, cdhr, rng);
  CHECK(s.phase_count == 1);
  CHECK(s.pooled.size() == 2);
  CHECK(valid_initialization(s.initialization.trace));
}

TEST_CASE("schedule on a slightly larger ball") {
  const int d = 10;
  const ConvexBody p = Ball(Vector::Zero(d), 1.05);
  const CoolingParams params = CoolingParams::for_dimension(d);
  RngStream rng(25);
  const ScheduleResult s = anneal(p, Ball(Vector::Zero(d), 1.0), params, 0.0, 1.05, WalkConfig{}, rng);
  CHECK(s.phase_count == 1);
  // vol(C' cap P) / vol(C') from closed-form ball volumes.
  const double q = ball_radius(s.terminal());
  const double exact = std::exp(d * (std::log(std::min(q, 1.05)) - std::log(q)));
  CHECK(exact >= params.r - 0.03);
  CHECK(exact <= params.r + params.delta + 0.03);
}

TEST_CASE("multi-phase ball schedules are nested and bisect correctly") {
  RngStream rng(26);
  const ConvexBody p = simplex_h(20);
  const CoolingParams params = CoolingParams::for_dimension(20);
  const Vector c = interior_point(p);
  const WalkConfig walk{WalkMode::cdhr, 1};
  auto [lo, hi] = initial_q_bounds(p, c, c, params.hnr_sample_size(), walk, rng);
  const ScheduleResult s = anneal(p, Ball(c, 1.0), params, lo, hi, walk, rng);
  REQUIRE(s.phase_count >= 2);
  CHECK(s.bodies.size() == static_cast<std::size_t>(s.phase_count));
  CHECK(s.pooled.size() == static_cast<std::size_t>(s.phase_count) + 1);
  CHECK(ball_radius(s.bodies.front()) <= ball_radius(s.outer));
  for (std::size_t i = 1; i < s.bodies.size(); ++i) CHECK(ball_radius(s.bodies[i]) <= ball_radius(s.bodies[i - 1]));
  CHECK(valid_initialization(s.initialization.trace));
  for (const PhaseDiagnostics& ph : s.phases) {
    REQUIRE_FALSE(ph.trace.empty());
    CHECK(ph.trace.front().s == 0.0);
    CHECK(valid_bisection(ph.trace, 1, 1.0));
  }
  CHECK(s.probes <= s.probe_cap);
}

TEST_CASE("H-body schedule on a low-order zonotope") {
  RngStream gen(10013);
  const Zonotope z = zono(10, 13, gen);
  RngStream rng(27);
  const ScheduleResult s = anneal_hbody(z, CoolingParams::for_dimension(10), WalkConfig{}, rng);
  CHECK(s.phase_count >= 1);
  CHECK(s.phase_count <= 3);
  CHECK(valid_initialization(s.initialization.trace));

  // Nesting: points of each body lie in the previous one.
  std::vector<MmcBody> chain{s.outer};
  chain.insert(chain.end(), s.bodies.begin(), s.bodies.end());
  for (std::size_t i = 1; i < chain.size(); ++i) {
    HitAndRun walker(Region{nullptr, &chain[i]}, Vector::Zero(10), WalkConfig{WalkMode::rdhr, 1});
    int inside = 0;
    for (int t = 0; t < 1000; ++t) inside += contains(chain[i - 1], walker.next(rng));
    CHECK(inside == 1000);
  }
}

TEST_CASE("terminal ratio of a small schedule") {
  RngStream rng(28);
  const ConvexBody p = cube(4);
  const CoolingParams params = CoolingParams::for_dimension(4);
  const WalkConfig walk{WalkMode::cdhr, 1};
  auto [lo, hi] = initial_q_bounds(p, Vector::Zero(4), Vector::Zero(4), params.hnr_sample_size(), walk, rng);
  const ScheduleResult s = anneal(p, Ball(Vector::Zero(4), 1.0), params, lo, hi, walk, rng);
  const Ball& b = std::get<Ball>(s.terminal());
  int in = 0;
  const int n = 100000;
  for (int t = 0; t < n; ++t) in += contains(p, sample_ball(rng, b));
  const double ratio = static_cast<double>(in) / n;
  CHECK(ratio >= params.r - 0.05);
  CHECK(ratio <= params.r + params.delta + 0.05);
}

TEST_CASE("interpolation between bodies") {
  const MmcBody a = Ball(Vector::Zero(2), 1.0);
  const MmcBody b = Ball(Vector::Zero(2), 3.0);
  CHECK(ball_radius(interpolate(a, b, 0.0)) == 1.0);
  CHECK(ball_radius(interpolate(a, b, 0.5)) == 2.0);
  CHECK(ball_radius(interpolate(a, b, 1.0)) == 3.0);

  RngStream rng(30);
  ShiftedHBody lo = zonotope_to_hbody(zono(3, 5, rng));
  ShiftedHBody hi = lo;
  lo.t = 0.2;
  hi.t = 0.8;
  const ShiftedHBody mid = std::get<ShiftedHBody>(interpolate(lo, hi, 0.5));
  CHECK((mid.offsets() - 0.5 * (lo.offsets() + hi.offsets())).norm() < 1e-12);
  CHECK_THROWS(interpolate(a, MmcBody(lo), 0.5));
}

}
