#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace eloc {

using Seconds = double;
using Meters = double;
using MetersPerSecond = double;

struct MobilityParams {
  std::int64_t duration_s = 3600;
  std::int64_t t1_s = 3;  // acceleration-change period
  MetersPerSecond v_min = 1.0;
  MetersPerSecond v_max = 10.0;
  MetersPerSecond v0 = 1.0;
  std::uint64_t seed = 1;

  // Throws ConfigError naming the first violated invariant.
  void validate() const;

  friend bool operator==(const MobilityParams&, const MobilityParams&) = default;
};

// Seeded source of uniform choices for the mobility model.
//
// Backed by std::mt19937_64, whose output sequence is fixed by the C++
// standard. Each choice consumes exactly one 64-bit output and maps it onto
// [0, n) with a 128-bit multiply-high, so traces are bit-reproducible across
// standard libraries (std::uniform_int_distribution is not).
class DrawSource {
 public:
  explicit DrawSource(std::uint64_t seed) : engine_(seed) {}

  // Uniform index in [0, n). Requires n >= 1.
  std::uint64_t uniform_index(std::uint64_t n);

  std::uint64_t draws() const { return draws_; }

 private:
  std::mt19937_64 engine_;
  std::uint64_t draws_ = 0;
};

// Bounded random acceleration in m/s^2, drawn uniformly from the steps in
// {-1, 0, +1} that keep the velocity within [v_min, v_max]: {0,+1} at v_min,
// {-1,0} at v_max, all three in between. Always consumes exactly one draw,
// including when only 0 is admissible.
int next_acceleration(MetersPerSecond v_prev, const MobilityParams& params, DrawSource& rng);

// Piecewise-constant velocity history; velocities()[t] holds over [t, t+1).
class MotionTrace {
 public:
  MotionTrace(MobilityParams params, std::vector<MetersPerSecond> velocities);

  const MobilityParams& params() const { return params_; }
  std::span<const MetersPerSecond> velocities() const { return velocities_; }
  Seconds duration() const { return static_cast<Seconds>(params_.duration_s); }

  MetersPerSecond velocity_at(Seconds t) const;

  // Exact integral of the velocity over [0, t].
  Meters position_at(Seconds t) const;

  friend bool operator==(const MotionTrace& a, const MotionTrace& b) {
    return a.params_ == b.params_ && a.velocities_ == b.velocities_;
  }

 private:
  void check_time(Seconds t) const;

  MobilityParams params_;
  std::vector<MetersPerSecond> velocities_;
  std::vector<Meters> prefix_;  // prefix_[k] = position at integer second k
};

MotionTrace generate_trace(const MobilityParams& params);

// Trace with a fixed velocity over the whole horizon; used for closed-form checks.
MotionTrace constant_trace(std::int64_t duration_s, MetersPerSecond v);

}  // namespace eloc
