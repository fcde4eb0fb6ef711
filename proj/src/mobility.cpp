#include "eloc/mobility.hpp"

#include <cmath>
#include <string>

#include <fmt/format.h>

#include "eloc/errors.hpp"

namespace eloc {

void MobilityParams::validate() const {
  if (duration_s < 0) throw ConfigError("duration_s must be >= 0");
  if (t1_s < 1) throw ConfigError("t1_s must be >= 1");
  if (!(v_min >= 1.0)) throw ConfigError("v_min must be >= 1");
  if (!(v_max >= v_min)) throw ConfigError("v_max must be >= v_min");
  if (!(v0 >= v_min && v0 <= v_max)) throw ConfigError("v0 must lie in [v_min, v_max]");
}

std::uint64_t DrawSource::uniform_index(std::uint64_t n) {
  ++draws_;
  __extension__ using Wide = unsigned __int128;
  const auto wide = static_cast<Wide>(engine_()) * n;
  return static_cast<std::uint64_t>(wide >> 64);
}

int next_acceleration(MetersPerSecond v_prev, const MobilityParams& params, DrawSource& rng) {
  if (!(v_prev >= params.v_min && v_prev <= params.v_max)) {
    throw InvalidState(fmt::format("velocity {} outside [{}, {}]", v_prev, params.v_min, params.v_max));
  }
  // Admissible steps are those that keep the velocity inside the band. On the
  // integer lattice this is {0,+1} at v_min, {-1,0} at v_max, {-1,0,+1} inside.
  int admissible[3];
  std::uint64_t n = 0;
  if (v_prev - 1.0 >= params.v_min) admissible[n++] = -1;
  admissible[n++] = 0;
  if (v_prev + 1.0 <= params.v_max) admissible[n++] = +1;
  return admissible[rng.uniform_index(n)];
}

MotionTrace::MotionTrace(MobilityParams params, std::vector<MetersPerSecond> velocities)
    : params_(params), velocities_(std::move(velocities)) {
  params_.validate();
  const auto expected = static_cast<std::size_t>(std::max<std::int64_t>(params_.duration_s, 1));
  if (velocities_.size() != expected) {
    throw ConfigError(fmt::format("trace holds {} velocities, expected {}", velocities_.size(), expected));
  }
  prefix_.reserve(velocities_.size() + 1);
  prefix_.push_back(0.0);
  for (auto v : velocities_) {
    if (!(v >= params_.v_min && v <= params_.v_max)) {
      throw ConfigError(fmt::format("trace velocity {} outside [{}, {}]", v, params_.v_min, params_.v_max));
    }
    prefix_.push_back(prefix_.back() + v);
  }
}

void MotionTrace::check_time(Seconds t) const {
  if (!(t >= 0.0 && t <= duration())) {
    throw DomainError(fmt::format("time {} outside [0, {}]", t, duration()));
  }
}

MetersPerSecond MotionTrace::velocity_at(Seconds t) const {
  check_time(t);
  const auto k = std::min(static_cast<std::size_t>(std::floor(t)), velocities_.size() - 1);
  return velocities_[k];
}

Meters MotionTrace::position_at(Seconds t) const {
  check_time(t);
  const double whole = std::floor(t);
  const auto k = static_cast<std::size_t>(whole);
  if (k >= velocities_.size()) return prefix_.back();
  return prefix_[k] + velocities_[k] * (t - whole);
}

MotionTrace generate_trace(const MobilityParams& params) {
  params.validate();
  DrawSource rng(params.seed);
  const auto n = static_cast<std::size_t>(std::max<std::int64_t>(params.duration_s, 1));
  std::vector<MetersPerSecond> v(n);
  v[0] = params.v0;
  for (std::size_t t = 1; t < n; ++t) {
    v[t] = v[t - 1];
    if (static_cast<std::int64_t>(t) % params.t1_s == 0) {
      v[t] += next_acceleration(v[t - 1], params, rng);
    }
  }
  return MotionTrace(params, std::move(v));
}

MotionTrace constant_trace(std::int64_t duration_s, MetersPerSecond v) {
  MobilityParams p;
  p.duration_s = duration_s;
  p.t1_s = duration_s + 1;
  p.v_min = v;
  p.v_max = v;
  p.v0 = v;
  p.seed = 0;
  const auto n = static_cast<std::size_t>(std::max<std::int64_t>(duration_s, 1));
  return MotionTrace(p, std::vector<MetersPerSecond>(n, v));
}

}  // namespace eloc
