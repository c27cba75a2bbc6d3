#include "polyvol/estimate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "polyvol/stats.hpp"

namespace polyvol {

SlidingWindow::SlidingWindow(std::size_t capacity) : buffer_(capacity) {
  if (capacity < 2) throw std::invalid_argument("SlidingWindow: capacity must be >= 2");
}

void SlidingWindow::push(double value) {
  if (size_ == 0) shift_ = value;
  if (full()) {
    const double old = buffer_[head_] - shift_;
    sum_ -= old;
    sum_sq_ -= old * old;
  } else {
    ++size_;
  }
  buffer_[head_] = value;
  head_ = (head_ + 1) % buffer_.size();
  const double x = value - shift_;
  sum_ += x;
  sum_sq_ += x * x;
  if (++since_refresh_ >= buffer_.size()) refresh();
}

void SlidingWindow::refresh() {
  since_refresh_ = 0;
  shift_ = recompute().first;
  sum_ = 0.0;
  sum_sq_ = 0.0;
  for (double v : values()) {
    sum_ += v - shift_;
    sum_sq_ += (v - shift_) * (v - shift_);
  }
}

double SlidingWindow::mean() const {
  if (size_ == 0) return 0.0;
  return shift_ + sum_ / static_cast<double>(size_);
}

double SlidingWindow::stddev() const {
  if (size_ == 0) return 0.0;
  const double n = static_cast<double>(size_);
  const double m = sum_ / n;
  return std::sqrt(std::max(0.0, sum_sq_ / n - m * m));
}

std::vector<double> SlidingWindow::values() const {
  std::vector<double> out;
  out.reserve(size_);
  const std::size_t start = (head_ + buffer_.size() - size_) % buffer_.size();
  for (std::size_t i = 0; i < size_; ++i) out.push_back(buffer_[(start + i) % buffer_.size()]);
  return out;
}

std::pair<double, double> SlidingWindow::recompute() const {
  if (size_ == 0) return {0.0, 0.0};
  const std::vector<double> v = values();
  double mu = 0.0;
  for (double x : v) mu += x;
  mu /= static_cast<double>(v.size());
  double acc = 0.0;
  for (double x : v) acc += (x - mu) * (x - mu);
  return {mu, std::sqrt(acc / static_cast<double>(v.size()))};
}

double ErrorBudget::sum_of_squares() const {
  double s = has_recursive ? recursive * recursive : 0.0;
  for (double e : ratios) s += e * e;
  return s;
}

ErrorBudget split_error(double epsilon, int m, bool terminal_is_hbody) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw std::invalid_argument("split_error: epsilon must lie in (0, 1]");
  if (m < 0) throw std::invalid_argument("split_error: m must be >= 0");
  ErrorBudget b;
  const double root = std::sqrt(m + 1.0);
  if (terminal_is_hbody) {
    b.has_recursive = true;
    b.recursive = epsilon / (2.0 * root);
    const double rest = epsilon * std::sqrt(2.0 * m + 1.0) / std::sqrt(2.0 * m + 2.0);
    b.ratios.assign(static_cast<std::size_t>(m) + 1, rest / root);
    return b;
  }
  if (m == 0) {
    b.ratios = {epsilon};
    return b;
  }
  const double rest = epsilon * std::sqrt(4.0 * (m + 1) - 1.0) / (2.0 * root);
  b.ratios.assign(static_cast<std::size_t>(m), rest / std::sqrt(static_cast<double>(m)));
  b.ratios.push_back(epsilon / (2.0 * root));
  return b;
}

double convergence_quantile(int m) {
  const double p = 1.0 - std::pow(0.75, 1.0 / (m + 1.0));
  return inverse_normal_quantile(1.0 - p / 2.0);
}

RatioEstimate estimate_ratio(const PointSource& next_point, const Membership& inside, const RatioOptions& options) {
  if (!(options.epsilon > 0.0)) throw std::invalid_argument("estimate_ratio: epsilon must be positive");
  if (options.window < 2) throw std::invalid_argument("estimate_ratio: window must be >= 2");
  if (options.seed.successes < 0 || options.seed.successes > options.seed.total)
    throw std::invalid_argument("estimate_ratio: inconsistent seed counts");
  const double z = convergence_quantile(options.m);

  SlidingWindow window(options.window);
  std::int64_t count_in = options.seed.successes;
  std::int64_t total = options.seed.total;
  RatioEstimate est;
  for (std::int64_t j = 1;; ++j) {
    if (j > options.step_cap) throw NumericError("estimate_ratio: step cap exceeded without convergence");
    if (inside(next_point())) ++count_in;
    ++total;
    const double r = static_cast<double>(count_in) / static_cast<double>(total);
    window.push(r);
    if (j > static_cast<std::int64_t>(options.window)) {
      const double s = window.stddev();
      const double low = r - z * s;
      if (low > 0.0 && 2.0 * z * s / low <= options.epsilon / 2.0) {
        est.ratio = r;
        est.points = j;
        est.window_std = s;
        est.binomial_half_width = z * std::sqrt(r * (1.0 - r) / static_cast<double>(total));
        return est;
      }
    }
  }
}

double ball_volume_log(int d, double radius) {
  if (d < 1) throw std::invalid_argument("ball_volume_log: d must be >= 1");
  if (!(radius > 0.0)) throw std::invalid_argument("ball_volume_log: radius must be positive");
  return d * std::log(radius) + 0.5 * d * std::log(M_PI) - std::lgamma(0.5 * d + 1.0);
}

const char* body_choice_name(BodyChoice choice) {
  switch (choice) {
    case BodyChoice::ball:
      return "ball";
    case BodyChoice::hbody:
      return "hbody";
    case BodyChoice::automatic:
      return "auto";
  }
  return "auto";
}

int body_size(const ConvexBody& body) {
  return std::visit(
      [](const auto& b) -> int {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, HPolytope>) return b.num_facets();
        if constexpr (std::is_same_v<T, VPolytope>) return b.num_vertices();
        if constexpr (std::is_same_v<T, Zonotope>) return b.num_generators();
        return 1;
      },
      body);
}

namespace {

double fraction_inside(const std::vector<Vector>& sample, const MmcBody& body) {
  std::int64_t hits = 0;
  for (const auto& x : sample) hits += contains(body, x) ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(sample.size());
}

struct Setup {
  ConvexBody body;
  double log_det_map = 0.0;
  CoolingParams params;
  WalkConfig walk;
  Vector start;
};

Setup prepare(const ConvexBody& input, const VolumeConfig& cfg) {
  if (!(cfg.epsilon > 0.0 && cfg.epsilon <= 1.0)) throw std::invalid_argument("volume: epsilon must lie in (0, 1]");
  if (cfg.round && !std::holds_alternative<VPolytope>(input))
    throw std::invalid_argument("volume: rounding applies to V-polytopes only");
  Setup s;
  s.body = input;
  if (cfg.round) {
    RoundedVPolytope rounded = round_vpolytope(std::get<VPolytope>(input));
    s.log_det_map = rounded.log_det_map;
    s.body = std::move(rounded.rounded);
  }
  if (cfg.body == BodyChoice::hbody && !std::holds_alternative<Zonotope>(s.body))
    throw std::invalid_argument("volume: the H-body template needs a zonotope");
  s.params = cfg.cooling.value_or(CoolingParams::for_dimension(dimension(input)));
  s.params.validate();
  const WalkMode mode =
      cfg.walk.value_or(std::holds_alternative<HPolytope>(s.body) ? WalkMode::cdhr : WalkMode::rdhr);
  s.walk = WalkConfig{mode, cfg.walk_steps};
  s.walk.validate();
  s.start = interior_point(s.body);
  return s;
}

// Initialization with the requested template; for `automatic` on a zonotope
// both are built and the one whose C' holds more of P is kept.
ScheduleResult build_schedule(const Setup& s, const VolumeConfig& cfg, RngStream& rng) {
  const ConvexBody& p = s.body;
  const CoolingParams& params = s.params;
  std::int64_t extra_steps = 0;
  std::int64_t extra_exact = 0;
  auto ball_init = [&] {
    const auto [q_min, q_max] =
        initial_q_bounds(p, s.start, s.start, params.hnr_sample_size(), s.walk, rng, &extra_steps);
    return initialize_ball(p, s.start, q_min, q_max, params, rng);
  };

  const auto* zono = std::get_if<Zonotope>(&p);
  Initialization init;
  if (!zono || cfg.body == BodyChoice::ball ||
      (cfg.body == BodyChoice::automatic && zono->num_generators() <= zono->dim())) {
    init = ball_init();
  } else if (cfg.body == BodyChoice::hbody) {
    init = initialize_hbody(*zono, params, rng);
  } else {
    Initialization with_ball = ball_init();
    Initialization with_hbody = initialize_hbody(*zono, params, rng);
    HitAndRun walker(Region{&p, nullptr}, s.start, s.walk);
    std::vector<Vector> sample(static_cast<std::size_t>(params.hnr_sample_size()));
    for (auto& x : sample) x = walker.next(rng);
    extra_steps += walker.steps();
    const double f_ball = fraction_inside(sample, with_ball.terminal);
    const double f_hbody = fraction_inside(sample, with_hbody.terminal);
    const double n = static_cast<double>(sample.size());
    const double sigma = std::sqrt((f_ball * (1 - f_ball) + f_hbody * (1 - f_hbody)) / n);
    const bool pick_hbody =
        std::abs(f_hbody - f_ball) <= 2.0 * sigma ? zono->order() <= 4.0 : f_hbody > f_ball;
    Initialization& dropped = pick_hbody ? with_ball : with_hbody;
    extra_steps += dropped.hnr_steps;
    extra_exact += dropped.exact_samples;
    init = std::move(pick_hbody ? with_hbody : with_ball);
  }
  init.hnr_steps += extra_steps;
  init.exact_samples += extra_exact;
  return complete_schedule(p, s.start, std::move(init), params, s.walk, rng);
}

VolumeReport volume_with(const ConvexBody& input, const VolumeConfig& cfg, RngStream& rng) {
  const auto t0 = std::chrono::steady_clock::now();
  VolumeReport rep;
  rep.representation = representation_name(input);
  rep.d = dimension(input);
  rep.size = body_size(input);
  rep.epsilon = cfg.epsilon;
  rep.seed = cfg.seed;

  const Setup setup = prepare(input, cfg);
  const ConvexBody& p = setup.body;
  const Vector& start = setup.start;
  const WalkConfig& walk = setup.walk;
  rep.log_det_map = setup.log_det_map;
  rep.walk = walk_name(walk.mode);
  const int d = rep.d;
  const std::size_t window = cfg.window.value_or(static_cast<std::size_t>(2 * d * d + 250));

  const ScheduleResult sched = build_schedule(setup, cfg, rng);
  const bool hbody = std::holds_alternative<ShiftedHBody>(sched.terminal());
  rep.body = hbody ? "hbody" : "ball";
  std::int64_t steps = sched.hnr_steps;
  std::int64_t exact = sched.exact_samples;
  rep.schedule_steps = steps;
  rep.m = sched.phase_count;
  rep.schedule.push_back(sched.initialization);
  rep.schedule.insert(rep.schedule.end(), sched.phases.begin(), sched.phases.end());

  const int m = sched.phase_count;
  const ErrorBudget budget = split_error(cfg.epsilon, m, hbody);
  double log_ratio_sum = 0.0;

  for (int i = 0; i < m; ++i) {
    const MmcBody* outer = i == 0 ? nullptr : &sched.bodies[static_cast<std::size_t>(i) - 1];
    const MmcBody& inner = sched.bodies[static_cast<std::size_t>(i)];
    HitAndRun walker(Region{&p, outer}, start, walk);
    RatioOptions opt;
    opt.epsilon = budget.ratios[static_cast<std::size_t>(i)];
    opt.m = m;
    opt.window = window;
    opt.seed = sched.pooled[static_cast<std::size_t>(i)];
    const RatioEstimate est = estimate_ratio([&]() -> const Vector& { return walker.next(rng); },
                                             [&](const Vector& x) { return contains(inner, x); }, opt);
    steps += walker.steps();
    rep.phases.push_back({est.ratio, opt.epsilon, est.points, walker.steps(), est.binomial_half_width});
    rep.ratios.push_back(est.ratio);
    log_ratio_sum += std::log(est.ratio);
  }

  const MmcBody& terminal = sched.terminal();
  RatioOptions opt;
  opt.epsilon = budget.terminal();
  opt.m = m;
  opt.window = window;
  opt.seed = sched.pooled.back();
  const Membership in_p = [&](const Vector& x) { return contains(p, x); };
  RatioEstimate last;
  std::int64_t last_steps = 0;
  if (const auto* ball = std::get_if<Ball>(&terminal)) {
    Vector point;
    last = estimate_ratio(
        [&]() -> const Vector& {
          point = sample_ball(rng, *ball);
          return point;
        },
        in_p, opt);
    exact += last.points;
    rep.log_terminal_volume = ball_volume_log(d, ball->radius);
  } else {
    HitAndRun walker(Region{nullptr, &terminal}, Vector::Zero(d), walk);
    last = estimate_ratio([&]() -> const Vector& { return walker.next(rng); }, in_p, opt);
    last_steps = walker.steps();
    steps += last_steps;

    VolumeConfig sub = cfg;
    sub.epsilon = budget.recursive;
    sub.body = BodyChoice::ball;
    sub.round = false;
    sub.cooling.reset();
    sub.window.reset();
    const ConvexBody c_m = std::get<ShiftedHBody>(terminal).to_hpolytope();
    auto inner_rep = std::make_shared<VolumeReport>(volume_with(c_m, sub, rng));
    rep.log_terminal_volume = inner_rep->log_volume;
    steps += inner_rep->steps_total;
    exact += inner_rep->exact_samples;
    rep.terminal = std::move(inner_rep);
  }
  rep.phases.push_back({last.ratio, opt.epsilon, last.points, last_steps, last.binomial_half_width});
  rep.ratios.push_back(last.ratio);

  rep.steps_total = steps;
  rep.exact_samples = exact;
  rep.log_volume = rep.log_terminal_volume + std::log(last.ratio) - log_ratio_sum - rep.log_det_map;
  rep.volume = std::exp(rep.log_volume);
  rep.time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

}  // namespace

VolumeReport volume(const ConvexBody& p, const VolumeConfig& cfg) {
  RngStream rng(cfg.seed);
  return volume_with(p, cfg, rng);
}

ScheduleResult volume_schedule(const ConvexBody& p, const VolumeConfig& cfg) {
  RngStream rng(cfg.seed);
  return build_schedule(prepare(p, cfg), cfg, rng);
}

}  // namespace polyvol
