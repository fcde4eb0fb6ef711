#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "eloc/mobility.hpp"

namespace eloc {

using Millijoules = double;

// A localization technique: worst-case error and energy per fix.
struct Method {
  std::string name;
  Meters accuracy_m = 0.0;
  Millijoules energy_mJ = 0.0;

  friend bool operator==(const Method&, const Method&) = default;
};

// GPS / WiFi / GSM with the accuracies and per-fix energies of the reference
// study: gps:10:1425;wifi:50:545;gsm:150:20.
std::vector<Method> default_methods();

// Parses `name:accuracy_m:energy_mJ` triples separated by ';'.
std::vector<Method> parse_methods(std::string_view text);
std::string format_methods(std::span<const Method> methods);

// Non-empty, positive accuracies and energies, unique names.
void validate_methods(std::span<const Method> methods);

struct StrategyConfig {
  double alpha = 0.5;  // EWMA weight on the newest sample, (0, 1]
  double beta = 0.5;   // fraction of the coarse interval between samples, (0, 1]
  std::vector<Method> methods = default_methods();
  Seconds t_min_refix_s = 1.0;

  void validate() const;
};

MetersPerSecond ewma_update(MetersPerSecond v_e_prev, MetersPerSecond v_new, double alpha);

// Energy spent per second of budget when locating with `method`: E / ((a_t - a_M) / v_e).
// Empty when the method cannot meet the requirement (a_M >= a_t).
std::optional<double> cost_rate(const Method& method, Meters a_t, MetersPerSecond v_e);

// Eligible method with the lowest cost rate; ties go to the smaller accuracy,
// then to the lexicographically smaller name. Empty when nothing is eligible.
std::optional<Method> select_method(std::span<const Method> methods, Meters a_t, MetersPerSecond v_e);

struct SampleAgainAt {
  Seconds t = 0.0;
  friend bool operator==(const SampleAgainAt&, const SampleAgainAt&) = default;
};

struct FixNowAt {
  Seconds t = 0.0;
  Method method;
  friend bool operator==(const FixNowAt&, const FixNowAt&) = default;
};

using FixDecision = std::variant<SampleAgainAt, FixNowAt>;

Seconds decision_time(const FixDecision& d);

struct SchedulerState {
  bool initialized = false;
  bool fallback = false;              // no method beat the requirement this epoch
  MetersPerSecond v_e = 0.0;
  Meters r_i = 0.0;                   // estimated distance moved since the fix
  Meters budget_m = 0.0;              // epoch_requirement_m - current_method.accuracy_m
  Seconds t_s = 0.0;                  // coarse interval, frozen for the epoch
  Seconds last_fix_time = 0.0;
  Method current_method;
  Meters epoch_requirement_m = 0.0;
  std::optional<Seconds> pending_sample;
  int samples_in_epoch = 0;
};

struct EpochStart {
  Method method;
  bool fallback = false;
  FixDecision next;  // SampleAgainAt normally, FixNowAt(t + t_min_refix_s) in fallback
};

// Next-fix estimation driven by velocity samples.
//
// A fix opens an epoch: the EWMA absorbs the velocity at the fix, a method is
// chosen for the current requirement, and the coarse interval
// t_s = (a_t - a_M) / v_e is frozen. Velocity is then resampled every t_s * beta;
// each sample updates the EWMA and adds v_e * t_s * beta to the estimated
// range. The first sample at which the range reaches the budget is the next
// fix. The EWMA carries over between epochs and is seeded by the first
// sample ever seen.
//
// With a pinned method (fixed-method baseline) selection is bypassed but the
// sampling loop is unchanged.
class Scheduler {
 public:
  explicit Scheduler(StrategyConfig cfg, std::optional<std::string> pinned_method = std::nullopt);

  EpochStart begin_epoch(Seconds t_fix, Meters a_t, MetersPerSecond v_sample);
  FixDecision on_velocity_sample(Seconds t, MetersPerSecond v_sample);

  // Requirement changed at t: drops any pending sample and reports the fix to
  // perform immediately. The caller then opens the new epoch with begin_epoch.
  FixNowAt on_requirement_change(Seconds t, Meters new_a_t);

  const SchedulerState& state() const { return state_; }
  const StrategyConfig& config() const { return cfg_; }

 private:
  // The method to use for a_t, and whether that is the fallback choice.
  std::pair<Method, bool> choose(Meters a_t, MetersPerSecond v_e) const;

  StrategyConfig cfg_;
  std::optional<Method> pinned_;
  SchedulerState state_;
};

}  // namespace eloc
