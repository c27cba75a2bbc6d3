#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "polyvol/bodies.hpp"
#include "polyvol/rng.hpp"
#include "polyvol/sampling.hpp"

namespace polyvol {

struct CoolingParams {
  double r = 0.1;
  double delta = 0.05;
  double alpha = 0.10;
  int nu = 10;
  /// N, points per sublist for HnR-sampled phases.
  int n_per_list = 120;
  /// nu N for phases sampled exactly from a ball, and for the H-body initialization.
  int exact_sample_size = 1200;

  void validate() const;
  int hnr_sample_size() const { return nu * n_per_list; }
  int exact_per_list() const { return (exact_sample_size + nu - 1) / nu; }

  /// Defaults with nu N = 1200 + 2 d^2 rounded up to a multiple of nu.
  static CoolingParams for_dimension(int d);
};

bool test_r(const std::vector<double>& ratios, double r, double alpha);
bool test_l(const std::vector<double>& ratios, double r, double delta, double alpha);

enum class Verdict { accept, too_large, too_small, contradiction };

struct TestOutcome {
  bool left;
  bool right;
  double mean;
  double pooled;
  Verdict verdict() const;
};

/// Both tests on the sublist ratios. When N r(1-r) <= 10 for the pooled ratio,
/// a test can only fail: the one on the side the ratio violates, or both when
/// the ratio lies inside [r, r + delta].
TestOutcome run_tests(const std::vector<double>& ratios, double pooled, int n_per_list, const CoolingParams& params);

/// Splits nu N membership flags into nu sublists of N, point j going to list
/// j mod nu, and returns the proportion of hits in each.
std::vector<double> sublist_ratios(const std::vector<char>& inside, int nu);

std::vector<double> ratios_from_sample(const std::vector<Vector>& points, const ConvexBody& inner, int nu);
std::vector<double> ratios_from_sample(const std::vector<Vector>& points, const MmcBody& inner, int nu);

/// q_min = 0 and q_max = the largest distance from `center` over sample_size
/// HnR points of p started at `start`.
std::pair<double, double> initial_q_bounds(const ConvexBody& p, const Vector& center, const Vector& start,
                                           int sample_size, const WalkConfig& walk, RngStream& rng,
                                           std::int64_t* steps = nullptr);

struct PooledRatio {
  std::int64_t successes = 0;
  std::int64_t total = 0;
  double value() const { return total > 0 ? static_cast<double>(successes) / total : 0.0; }
};

struct ProbeRecord {
  double s;
  double mean;
  bool left;
  bool right;
};

struct PhaseDiagnostics {
  double s = 0.0;  // accepted position in the phase's body family
  int probes = 0;
  int resamples = 0;
  std::int64_t hnr_steps = 0;
  std::vector<ProbeRecord> trace;
};

struct ScheduleResult {
  MmcBody outer;                // C_0, encloses P
  std::vector<MmcBody> bodies;  // C_1 .. C_m; the last one is C'
  int phase_count = 0;
  // Pooled sample proportions behind r_0 .. r_{m-1} followed by r_m.
  std::vector<PooledRatio> pooled;
  PhaseDiagnostics initialization;
  std::vector<PhaseDiagnostics> phases;
  int probe_cap = 0;
  int probes = 0;
  std::int64_t hnr_steps = 0;
  std::int64_t exact_samples = 0;

  const MmcBody& terminal() const { return bodies.back(); }
};

class ScheduleError : public std::runtime_error {
 public:
  ScheduleError(const std::string& what, ScheduleResult partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const ScheduleResult& partial() const { return partial_; }

 private:
  ScheduleResult partial_;
};

/// Result of the initialization stage: C' and the enclosing body C_0.
struct Initialization {
  MmcBody terminal;
  MmcBody outer;
  PooledRatio terminal_ratio;
  PhaseDiagnostics diagnostics;
  int probe_cap = 0;
  int probes = 0;
  std::int64_t hnr_steps = 0;
  std::int64_t exact_samples = 0;
};

Initialization initialize_ball(const ConvexBody& p, const Vector& center, double q_min, double q_max,
                               const CoolingParams& params, RngStream& rng);

/// Initialization over the facet-shift family from b0 to b_max of
/// zonotope_to_hbody(z).
Initialization initialize_hbody(const Zonotope& z, const CoolingParams& params, RngStream& rng);

/// Regular steps of the schedule, sampling P_i with HnR from `start`.
ScheduleResult complete_schedule(const ConvexBody& p, const Vector& start, Initialization init,
                                 const CoolingParams& params, const WalkConfig& walk, RngStream& rng);

/// Schedule with balls centered at the template's center; the template radius is ignored.
ScheduleResult anneal(const ConvexBody& p, const Ball& ball_template, const CoolingParams& params, double q_min,
                      double q_max, const WalkConfig& walk, RngStream& rng);

ScheduleResult anneal_hbody(const Zonotope& z, const CoolingParams& params, const WalkConfig& walk, RngStream& rng);

/// Member of the family between two nested MMC bodies of the same kind:
/// radii or offsets interpolated linearly, s = 0 gives `lo`, s = 1 gives `hi`.
MmcBody interpolate(const MmcBody& lo, const MmcBody& hi, double s);

}  // namespace polyvol
