#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "polyvol/bodies.hpp"
#include "polyvol/rng.hpp"

namespace polyvol {

enum class WalkMode { cdhr, rdhr };

struct WalkConfig {
  WalkMode mode = WalkMode::rdhr;
  int steps_per_sample = 1;

  void validate() const;
};

const char* walk_name(WalkMode mode);

Vector sample_unit_sphere(RngStream& rng, int d);

/// Exact uniform point of the ball: uniform direction, radius r U^(1/d).
Vector sample_ball(RngStream& rng, const Ball& ball);

// Intersection of an input body and an MMC body. Either pointer may be null,
// not both. The pointees must outlive the region.
struct Region {
  const ConvexBody* body = nullptr;
  const MmcBody* mmc = nullptr;

  int dim() const;
  bool contains(const Vector& x) const;
  Chord chord(const Vector& x, const Vector& v) const;
};

/// One Hit-and-Run move (repeated steps_per_sample times) from x.
Vector hnr_step(const Region& region, const Vector& x, const WalkConfig& cfg, RngStream& rng);

// Stateful Hit-and-Run chain. H-type constraints keep their slack vector up to
// date between moves, so a coordinate move costs O(facets).
class HitAndRun {
 public:
  HitAndRun(Region region, Vector start, WalkConfig cfg);
  ~HitAndRun();
  HitAndRun(HitAndRun&&) noexcept;
  HitAndRun& operator=(HitAndRun&&) noexcept;

  /// Advances steps_per_sample moves and returns the new position.
  const Vector& next(RngStream& rng);
  const Vector& position() const { return x_; }
  std::int64_t steps() const { return steps_; }

  class Cursor;

 private:
  void move_once(RngStream& rng);

  Region region_;
  Vector x_;
  Vector direction_;
  WalkConfig cfg_;
  std::vector<std::unique_ptr<Cursor>> cursors_;
  std::int64_t steps_ = 0;
};

}  // namespace polyvol
