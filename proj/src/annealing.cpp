#include "polyvol/annealing.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "polyvol/stats.hpp"

namespace polyvol {

namespace {

constexpr int kMaxExpansions = 30;
constexpr double kMinBracket = 1e-4;

double mean_of(const std::vector<double>& xs) {
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double sample_std(const std::vector<double>& xs) {
  const double mu = mean_of(xs);
  double acc = 0.0;
  for (double x : xs) acc += (x - mu) * (x - mu);
  return std::sqrt(acc / static_cast<double>(xs.size() - 1));
}

double test_margin(const std::vector<double>& ratios, double alpha) {
  if (ratios.size() < 2) throw std::invalid_argument("t-test needs at least two sublists");
  const int nu = static_cast<int>(ratios.size());
  return t_quantile(nu - 1, alpha) * sample_std(ratios) / std::sqrt(static_cast<double>(nu));
}

int probe_cap_for(int d, double q_min, double q_max) {
  const double q_min_pos = std::max(q_min, 1e-4 * q_max);
  const double spread = std::max(q_max / q_min_pos, 10.0);
  return 20 * static_cast<int>(std::ceil(d * std::log2(spread)));
}

PooledRatio count_hits(const std::vector<char>& inside) {
  PooledRatio p;
  p.total = static_cast<std::int64_t>(inside.size());
  p.successes = std::count(inside.begin(), inside.end(), char{1});
  return p;
}

template <class Body>
std::vector<char> membership(const std::vector<Vector>& points, const Body& body) {
  std::vector<char> inside(points.size());
  for (std::size_t j = 0; j < points.size(); ++j) inside[j] = contains(body, points[j]) ? 1 : 0;
  return inside;
}

ScheduleResult partial_from(const Initialization& init) {
  ScheduleResult res;
  res.initialization = init.diagnostics;
  res.probe_cap = init.probe_cap;
  res.probes = init.probes;
  res.hnr_steps = init.hnr_steps;
  res.exact_samples = init.exact_samples;
  return res;
}

using Family = std::function<MmcBody(double)>;
// Draws a fresh sample from the given body and reports which points lie in P.
using Draw = std::function<std::vector<char>(const MmcBody&)>;

void run_initialization(Initialization& init, const Family& family, const Draw& draw, int per_list,
                        const CoolingParams& params) {
  PhaseDiagnostics& diag = init.diagnostics;
  MmcBody body;
  PooledRatio pooled;

  auto probe = [&](double s) {
    if (init.probes >= init.probe_cap) throw ScheduleError("schedule failed to terminate", partial_from(init));
    ++init.probes;
    ++diag.probes;
    body = family(s);
    const std::vector<char> inside = draw(body);
    pooled = count_hits(inside);
    const TestOutcome out = run_tests(sublist_ratios(inside, params.nu), pooled.value(), per_list, params);
    diag.trace.push_back({s, out.mean, out.left, out.right});
    return out.verdict();
  };
  auto finish = [&](double s, double top) {
    diag.s = s;
    init.terminal = body;
    init.outer = family(top);
    init.terminal_ratio = pooled;
  };

  double top = 1.0;
  for (int expansions = 0;;) {
    const Verdict v = probe(top);
    if (v == Verdict::accept) return finish(top, top);
    if (v == Verdict::too_small) break;
    if (v == Verdict::contradiction) {
      ++diag.resamples;
      continue;
    }
    if (++expansions > kMaxExpansions)
      throw ScheduleError("schedule failed to terminate: enclosing body too small", partial_from(init));
    top *= 2.0;
  }

  double lo = 0.0;
  double hi = top;
  double s = 0.5 * (lo + hi);
  for (;;) {
    switch (probe(s)) {
      case Verdict::accept:
        return finish(s, top);
      case Verdict::too_large:
        lo = s;
        break;
      case Verdict::too_small:
        hi = s;
        break;
      case Verdict::contradiction:
        ++diag.resamples;
        continue;
    }
    if (hi - lo <= kMinBracket * top) {
      ++diag.resamples;
      lo = 0.0;
      hi = top;
    }
    s = 0.5 * (lo + hi);
  }
}

}  // namespace

void CoolingParams::validate() const {
  if (!(r > 0.0) || !(delta > 0.0) || !(r + delta < 1.0))
    throw std::invalid_argument("CoolingParams: need 0 < r, 0 < delta, r + delta < 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("CoolingParams: alpha must lie in (0, 1)");
  if (nu < 2) throw std::invalid_argument("CoolingParams: nu must be >= 2");
  if (n_per_list < 1 || exact_sample_size < nu) throw std::invalid_argument("CoolingParams: sample sizes too small");
}

CoolingParams CoolingParams::for_dimension(int d) {
  CoolingParams p;
  const int total = 1200 + 2 * d * d;
  p.n_per_list = (total + p.nu - 1) / p.nu;
  return p;
}

bool test_r(const std::vector<double>& ratios, double r, double alpha) {
  return mean_of(ratios) >= r + test_margin(ratios, alpha);
}

bool test_l(const std::vector<double>& ratios, double r, double delta, double alpha) {
  return mean_of(ratios) <= r + delta - test_margin(ratios, alpha);
}

Verdict TestOutcome::verdict() const {
  if (left && right) return Verdict::accept;
  if (right) return Verdict::too_large;
  if (left) return Verdict::too_small;
  return Verdict::contradiction;
}

TestOutcome run_tests(const std::vector<double>& ratios, double pooled, int n_per_list, const CoolingParams& params) {
  TestOutcome out;
  out.mean = mean_of(ratios);
  out.pooled = pooled;
  out.left = test_l(ratios, params.r, params.delta, params.alpha);
  out.right = test_r(ratios, params.r, params.alpha);
  if (n_per_list * pooled * (1.0 - pooled) <= 10.0) {
    if (pooled < params.r) {
      out.right = false;
    } else if (pooled > params.r + params.delta) {
      out.left = false;
    } else {
      out.left = false;
      out.right = false;
    }
  }
  return out;
}

std::vector<double> sublist_ratios(const std::vector<char>& inside, int nu) {
  if (nu < 1 || inside.size() % static_cast<std::size_t>(nu) != 0 || inside.empty())
    throw std::invalid_argument("sublist_ratios: sample size must be a positive multiple of nu");
  const std::size_t lists = static_cast<std::size_t>(nu);
  std::vector<double> ratios(lists, 0.0);
  for (std::size_t j = 0; j < inside.size(); ++j) ratios[j % lists] += inside[j];
  const double n = static_cast<double>(inside.size() / lists);
  for (double& r : ratios) r /= n;
  return ratios;
}

std::vector<double> ratios_from_sample(const std::vector<Vector>& points, const ConvexBody& inner, int nu) {
  return sublist_ratios(membership(points, inner), nu);
}

std::vector<double> ratios_from_sample(const std::vector<Vector>& points, const MmcBody& inner, int nu) {
  return sublist_ratios(membership(points, inner), nu);
}

std::pair<double, double> initial_q_bounds(const ConvexBody& p, const Vector& center, const Vector& start,
                                           int sample_size, const WalkConfig& walk, RngStream& rng,
                                           std::int64_t* steps) {
  if (sample_size < 1) throw std::invalid_argument("initial_q_bounds: sample_size must be positive");
  HitAndRun walker(Region{&p, nullptr}, start, walk);
  double q_max = (start - center).norm();
  for (int j = 0; j < sample_size; ++j) q_max = std::max(q_max, (walker.next(rng) - center).norm());
  if (steps) *steps += walker.steps();
  if (!(q_max > 0.0)) throw NumericError("initial_q_bounds: degenerate sample");
  return {0.0, q_max};
}

MmcBody interpolate(const MmcBody& lo, const MmcBody& hi, double s) {
  if (const auto* a = std::get_if<Ball>(&lo)) {
    const auto* b = std::get_if<Ball>(&hi);
    if (!b) throw std::invalid_argument("interpolate: bodies of different kinds");
    return Ball(a->center, a->radius + s * (b->radius - a->radius));
  }
  const auto& a = std::get<ShiftedHBody>(lo);
  const auto* b = std::get_if<ShiftedHBody>(&hi);
  if (!b) throw std::invalid_argument("interpolate: bodies of different kinds");
  return ShiftedHBody{a.normals, a.b0, a.offsets(), b->offsets(), s};
}

Initialization initialize_ball(const ConvexBody& p, const Vector& center, double q_min, double q_max,
                               const CoolingParams& params, RngStream& rng) {
  params.validate();
  if (!(q_min >= 0.0 && q_min < q_max)) throw std::invalid_argument("initialize_ball: need 0 <= q_min < q_max");
  const int d = dimension(p);
  if (center.size() != d) throw std::invalid_argument("initialize_ball: center has wrong dimension");

  Initialization init;
  init.probe_cap = probe_cap_for(d, q_min, q_max);
  const int per_list = params.exact_per_list();
  const int total = per_list * params.nu;

  Family family = [&](double s) -> MmcBody { return Ball(center, q_min + s * (q_max - q_min)); };
  Draw draw = [&](const MmcBody& body) {
    const Ball& ball = std::get<Ball>(body);
    std::vector<char> inside(static_cast<std::size_t>(total));
    for (auto& flag : inside) flag = contains(p, sample_ball(rng, ball)) ? 1 : 0;
    init.exact_samples += total;
    return inside;
  };
  run_initialization(init, family, draw, per_list, params);
  return init;
}

Initialization initialize_hbody(const Zonotope& z, const CoolingParams& params, RngStream& rng) {
  params.validate();
  const int d = z.dim();
  const ShiftedHBody base = zonotope_to_hbody(z);
  const ConvexBody p = z;

  Initialization init;
  init.probe_cap = probe_cap_for(d, 0.0, 1.0);
  const int per_list = params.exact_per_list();
  const int total = per_list * params.nu;
  const WalkConfig long_walk{WalkMode::rdhr, 10 + 2 * d};

  Family family = [&](double s) -> MmcBody {
    ShiftedHBody body = base;
    body.t = s;
    return body;
  };
  Draw draw = [&](const MmcBody& body) {
    HitAndRun walker(Region{nullptr, &body}, Vector::Zero(d), long_walk);
    std::vector<char> inside(static_cast<std::size_t>(total));
    for (auto& flag : inside) flag = contains(p, walker.next(rng)) ? 1 : 0;
    init.hnr_steps += walker.steps();
    init.diagnostics.hnr_steps += walker.steps();
    return inside;
  };
  run_initialization(init, family, draw, per_list, params);
  return init;
}

ScheduleResult complete_schedule(const ConvexBody& p, const Vector& start, Initialization init,
                                 const CoolingParams& params, const WalkConfig& walk, RngStream& rng) {
  params.validate();
  ScheduleResult res = partial_from(init);
  res.outer = init.outer;
  const MmcBody& c_prime = init.terminal;
  const int per_list = params.n_per_list;
  const int total = params.hnr_sample_size();

  auto fail = [&](const char* what) { throw ScheduleError(what, res); };

  MmcBody current = init.outer;
  for (;;) {
    PhaseDiagnostics diag;
    const bool first = res.bodies.empty();
    HitAndRun walker(Region{&p, first ? nullptr : &current}, start, walk);
    std::vector<Vector> sample(static_cast<std::size_t>(total));
    auto draw = [&] {
      const std::int64_t before = walker.steps();
      for (auto& x : sample) x = walker.next(rng);
      diag.hnr_steps += walker.steps() - before;
      res.hnr_steps += walker.steps() - before;
    };
    auto evaluate = [&](const MmcBody& body, double s, PooledRatio& pooled) {
      if (res.probes >= res.probe_cap) {
        res.phases.push_back(diag);
        fail("schedule failed to terminate");
      }
      ++res.probes;
      ++diag.probes;
      const std::vector<char> inside = membership(sample, body);
      pooled = count_hits(inside);
      const TestOutcome out = run_tests(sublist_ratios(inside, params.nu), pooled.value(), per_list, params);
      diag.trace.push_back({s, out.mean, out.left, out.right});
      return out;
    };

    draw();
    PooledRatio pooled;
    if (evaluate(c_prime, 0.0, pooled).right) {
      diag.s = 0.0;
      res.phases.push_back(diag);
      res.pooled.push_back(pooled);
      res.bodies.push_back(c_prime);
      break;
    }

    double lo = 0.0;
    double hi = 1.0;
    double s = 0.5;
    MmcBody next;
    for (bool accepted = false; !accepted;) {
      next = interpolate(c_prime, current, s);
      switch (evaluate(next, s, pooled).verdict()) {
        case Verdict::accept:
          accepted = true;
          continue;
        case Verdict::too_large:
          hi = s;
          break;
        case Verdict::too_small:
          lo = s;
          break;
        case Verdict::contradiction:
          ++diag.resamples;
          draw();
          continue;
      }
      if (hi - lo <= kMinBracket) {
        ++diag.resamples;
        draw();
        lo = 0.0;
        hi = 1.0;
      }
      s = 0.5 * (lo + hi);
    }
    diag.s = s;
    res.phases.push_back(diag);
    res.pooled.push_back(pooled);
    res.bodies.push_back(next);
    current = std::move(next);
  }

  res.pooled.push_back(init.terminal_ratio);
  res.phase_count = static_cast<int>(res.bodies.size());
  return res;
}

ScheduleResult anneal(const ConvexBody& p, const Ball& ball_template, const CoolingParams& params, double q_min,
                      double q_max, const WalkConfig& walk, RngStream& rng) {
  const Vector start = interior_point(p);
  Initialization init = initialize_ball(p, ball_template.center, q_min, q_max, params, rng);
  return complete_schedule(p, start, std::move(init), params, walk, rng);
}

ScheduleResult anneal_hbody(const Zonotope& z, const CoolingParams& params, const WalkConfig& walk, RngStream& rng) {
  Initialization init = initialize_hbody(z, params, rng);
  const ConvexBody p = z;
  return complete_schedule(p, Vector::Zero(z.dim()), std::move(init), params, walk, rng);
}

}  // namespace polyvol
