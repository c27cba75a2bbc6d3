#include "polyvol/sampling.hpp"

#include <algorithm>
#include <cmath>

namespace polyvol {

void WalkConfig::validate() const {
  if (steps_per_sample < 1) throw std::invalid_argument("WalkConfig: steps_per_sample must be >= 1");
}

const char* walk_name(WalkMode mode) {
  return mode == WalkMode::cdhr ? "cdhr" : "rdhr";
}

Vector sample_unit_sphere(RngStream& rng, int d) {
  if (d < 1) throw std::invalid_argument("sample_unit_sphere: d must be >= 1");
  Vector v(d);
  double norm2;
  do {
    for (int i = 0; i < d; ++i) v[i] = rng.normal();
    norm2 = v.squaredNorm();
  } while (norm2 == 0.0);
  return v / std::sqrt(norm2);
}

Vector sample_ball(RngStream& rng, const Ball& ball) {
  const int d = ball.dim();
  const double radius = ball.radius * std::pow(rng.uniform(), 1.0 / d);
  return ball.center + radius * sample_unit_sphere(rng, d);
}

int Region::dim() const {
  if (body) return dimension(*body);
  if (mmc) return dimension(*mmc);
  throw std::invalid_argument("Region: empty region");
}

bool Region::contains(const Vector& x) const {
  if (body && !polyvol::contains(*body, x)) return false;
  if (mmc && !polyvol::contains(*mmc, x)) return false;
  return body || mmc;
}

Chord Region::chord(const Vector& x, const Vector& v) const {
  Chord c{-kInf, kInf};
  if (body) {
    const Chord b = line_intersection(*body, x, v);
    c = {std::max(c.lo, b.lo), std::min(c.hi, b.hi)};
  }
  if (mmc) {
    const Chord b = line_intersection(*mmc, x, v);
    c = {std::max(c.lo, b.lo), std::min(c.hi, b.hi)};
  }
  return c;
}

class HitAndRun::Cursor {
 public:
  virtual ~Cursor() = default;
  virtual void reset(const Vector& x) = 0;
  virtual Chord coordinate_chord(const Vector& x, Eigen::Index j) = 0;
  virtual Chord direction_chord(const Vector& x, const Vector& v) = 0;
  virtual void coordinate_moved(Eigen::Index, double) {}
  virtual void direction_moved(double) {}
};

namespace {

class HalfspaceCursor final : public HitAndRun::Cursor {
 public:
  HalfspaceCursor(const Matrix& a, Vector offsets) : a_(a), offsets_(std::move(offsets)) {}

  void reset(const Vector& x) override {
    slack_ = offsets_ - a_ * x;
    if ((slack_.array() < -kMembershipTol).any())
      throw std::invalid_argument("HitAndRun: starting point outside the body");
    slack_ = slack_.cwiseMax(0.0);
  }

  Chord coordinate_chord(const Vector&, Eigen::Index j) override {
    return chord_from(a_.col(j));
  }

  Chord direction_chord(const Vector&, const Vector& v) override {
    av_.noalias() = a_ * v;
    return chord_from(av_);
  }

  void coordinate_moved(Eigen::Index j, double t) override {
    slack_ -= t * a_.col(j);
    slack_ = slack_.cwiseMax(0.0);
  }

  void direction_moved(double t) override {
    slack_ -= t * av_;
    slack_ = slack_.cwiseMax(0.0);
  }

 private:
  template <class Col>
  Chord chord_from(const Col& rate) const {
    Chord c{-kInf, kInf};
    for (Eigen::Index i = 0; i < rate.size(); ++i) {
      const double r = rate[i];
      if (r > 0.0)
        c.hi = std::min(c.hi, slack_[i] / r);
      else if (r < 0.0)
        c.lo = std::max(c.lo, slack_[i] / r);
    }
    return c;
  }

  const Matrix& a_;
  Vector offsets_;
  Vector slack_;
  Vector av_;
};

class BallCursor final : public HitAndRun::Cursor {
 public:
  explicit BallCursor(const Ball& ball) : ball_(ball) {}
  void reset(const Vector&) override {}
  Chord coordinate_chord(const Vector& x, Eigen::Index j) override {
    Vector e = Vector::Zero(x.size());
    e[j] = 1.0;
    return line_intersection(ball_, x, e);
  }
  Chord direction_chord(const Vector& x, const Vector& v) override { return line_intersection(ball_, x, v); }

 private:
  const Ball& ball_;
};

class LpCursor final : public HitAndRun::Cursor {
 public:
  explicit LpCursor(const ConvexBody& body) : body_(body) {}
  void reset(const Vector&) override {}
  Chord coordinate_chord(const Vector& x, Eigen::Index j) override {
    Vector e = Vector::Zero(x.size());
    e[j] = 1.0;
    return direction_chord(x, e);
  }
  Chord direction_chord(const Vector& x, const Vector& v) override {
    if (const auto* z = std::get_if<Zonotope>(&body_)) return lp_.solve(*z, x, v);
    return lp_.solve(std::get<VPolytope>(body_), x, v);
  }

 private:
  const ConvexBody& body_;
  BoundaryLp lp_;
};

}  // namespace

HitAndRun::HitAndRun(Region region, Vector start, WalkConfig cfg)
    : region_(region), x_(std::move(start)), cfg_(cfg) {
  cfg_.validate();
  if (x_.size() != region_.dim()) throw std::invalid_argument("HitAndRun: start point has wrong dimension");
  if (region_.body) {
    std::visit(
        [&](const auto& b) {
          using T = std::decay_t<decltype(b)>;
          if constexpr (std::is_same_v<T, HPolytope>)
            cursors_.push_back(std::make_unique<HalfspaceCursor>(b.a, b.b));
          else if constexpr (std::is_same_v<T, Ball>)
            cursors_.push_back(std::make_unique<BallCursor>(b));
          else
            cursors_.push_back(std::make_unique<LpCursor>(*region_.body));
        },
        *region_.body);
  }
  if (region_.mmc) {
    std::visit(
        [&](const auto& b) {
          using T = std::decay_t<decltype(b)>;
          if constexpr (std::is_same_v<T, Ball>)
            cursors_.push_back(std::make_unique<BallCursor>(b));
          else
            cursors_.push_back(std::make_unique<HalfspaceCursor>(*b.normals, b.offsets()));
        },
        *region_.mmc);
  }
  for (auto& c : cursors_) c->reset(x_);
}

HitAndRun::~HitAndRun() = default;
HitAndRun::HitAndRun(HitAndRun&&) noexcept = default;
HitAndRun& HitAndRun::operator=(HitAndRun&&) noexcept = default;

void HitAndRun::move_once(RngStream& rng) {
  const int d = static_cast<int>(x_.size());
  Chord chord{-kInf, kInf};
  Eigen::Index coord = -1;
  if (cfg_.mode == WalkMode::cdhr) {
    coord = static_cast<Eigen::Index>(rng.index(static_cast<std::uint64_t>(d)));
    for (auto& c : cursors_) {
      const Chord part = c->coordinate_chord(x_, coord);
      chord = {std::max(chord.lo, part.lo), std::min(chord.hi, part.hi)};
    }
  } else {
    direction_ = sample_unit_sphere(rng, d);
    for (auto& c : cursors_) {
      const Chord part = c->direction_chord(x_, direction_);
      chord = {std::max(chord.lo, part.lo), std::min(chord.hi, part.hi)};
    }
  }
  if (!std::isfinite(chord.lo) || !std::isfinite(chord.hi)) throw NumericError("HitAndRun: unbounded chord");
  chord.lo = std::min(chord.lo, 0.0);
  chord.hi = std::max(chord.hi, 0.0);
  // Keep off the exact boundary.
  const double nudge = 1e-10 * (chord.hi - chord.lo);
  const double t = rng.uniform(chord.lo + nudge, chord.hi - nudge);

  if (coord >= 0) {
    x_[coord] += t;
    for (auto& c : cursors_) c->coordinate_moved(coord, t);
  } else {
    x_ += t * direction_;
    for (auto& c : cursors_) c->direction_moved(t);
  }
  ++steps_;
  if (steps_ % 1024 == 0)
    for (auto& c : cursors_) c->reset(x_);
}

const Vector& HitAndRun::next(RngStream& rng) {
  for (int s = 0; s < cfg_.steps_per_sample; ++s) move_once(rng);
  return x_;
}

Vector hnr_step(const Region& region, const Vector& x, const WalkConfig& cfg, RngStream& rng) {
  if (!region.contains(x)) throw std::invalid_argument("hnr_step: point outside the body");
  HitAndRun walker(region, x, cfg);
  return walker.next(rng);
}

}  // namespace polyvol
