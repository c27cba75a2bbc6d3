#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "polyvol/annealing.hpp"
#include "polyvol/bodies.hpp"
#include "polyvol/sampling.hpp"

namespace polyvol {

/// Last k values pushed, with mean and population standard deviation in O(1).
class SlidingWindow {
 public:
  explicit SlidingWindow(std::size_t capacity);

  void push(double value);
  std::size_t size() const { return size_; }
  std::size_t capacity() const { return buffer_.size(); }
  bool full() const { return size_ == buffer_.size(); }
  double mean() const;
  double stddev() const;

  /// Mean and standard deviation recomputed from the stored values.
  std::pair<double, double> recompute() const;
  std::vector<double> values() const;

 private:
  void refresh();

  std::vector<double> buffer_;
  std::size_t head_ = 0;
  std::size_t size_ = 0;
  // Sums of (x - shift) and (x - shift)^2; the shift keeps the variance free of cancellation.
  double shift_ = 0.0;
  double sum_ = 0.0;
  double sum_sq_ = 0.0;
  std::size_t since_refresh_ = 0;
};

struct ErrorBudget {
  std::vector<double> ratios;  // eps_0 .. eps_m, the last one for r_m
  double recursive = 0.0;      // eps'' for vol(C_m) when C_m is an H-body
  bool has_recursive = false;

  double terminal() const { return ratios.back(); }
  double sum_of_squares() const;
};

ErrorBudget split_error(double epsilon, int m, bool terminal_is_hbody);

struct RatioOptions {
  double epsilon = 0.1;
  int m = 1;
  std::size_t window = 250;
  PooledRatio seed;  // earlier successes and trials folded into the running ratio
  std::int64_t step_cap = 100000000;
};

struct RatioEstimate {
  double ratio = 0.0;
  std::int64_t points = 0;  // fresh points drawn
  double window_std = 0.0;
  // Binomial interval half width at level p, for comparison only.
  double binomial_half_width = 0.0;
};

using PointSource = std::function<const Vector&()>;
using Membership = std::function<bool(const Vector&)>;

/// Running proportion of points from `next_point` accepted by `inside`, stopped
/// once 2 z s / (r - z s) <= epsilon / 2 where s is the window std and
/// z = Phi^{-1}(1 - p/2), p = 1 - (3/4)^(1/(m+1)).
RatioEstimate estimate_ratio(const PointSource& next_point, const Membership& inside, const RatioOptions& options);

/// z_{p/2} of the convergence test for m phases.
double convergence_quantile(int m);

double ball_volume_log(int d, double radius);

enum class BodyChoice { ball, hbody, automatic };

const char* body_choice_name(BodyChoice choice);

struct VolumeConfig {
  double epsilon = 0.1;
  BodyChoice body = BodyChoice::automatic;
  std::optional<WalkMode> walk;  // default: CDHR for H-polytopes, RDHR otherwise
  int walk_steps = 1;
  std::uint64_t seed = 0;
  bool round = false;
  std::optional<CoolingParams> cooling;
  std::optional<std::size_t> window;
};

struct PhaseReport {
  double ratio = 0.0;
  double epsilon = 0.0;
  std::int64_t points = 0;
  std::int64_t steps = 0;
  double binomial_half_width = 0.0;
};

struct VolumeReport {
  std::string representation;
  int d = 0;
  int size = 0;  // facets, vertices or generators
  double epsilon = 0.0;
  std::uint64_t seed = 0;
  std::string body;
  std::string walk;
  int m = 0;
  std::vector<double> ratios;  // r_0 .. r_m
  std::vector<PhaseReport> phases;
  std::vector<PhaseDiagnostics> schedule;  // initialization first, then one entry per regular step
  std::int64_t schedule_steps = 0;
  std::int64_t steps_total = 0;
  std::int64_t exact_samples = 0;
  double log_terminal_volume = 0.0;
  double log_det_map = 0.0;
  double log_volume = 0.0;
  double volume = 0.0;  // exp(log_volume); may be inf
  double time_seconds = 0.0;
  std::shared_ptr<VolumeReport> terminal;  // recursive estimate of vol(C_m)
};

int body_size(const ConvexBody& body);

VolumeReport volume(const ConvexBody& p, const VolumeConfig& cfg);

/// The schedule stage of `volume` alone, with the same body selection and RNG stream.
ScheduleResult volume_schedule(const ConvexBody& p, const VolumeConfig& cfg);

}  // namespace polyvol
