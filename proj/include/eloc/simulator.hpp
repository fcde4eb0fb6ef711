#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "eloc/mobility.hpp"
#include "eloc/strategy.hpp"

namespace eloc {

// Piecewise-constant accuracy requirement, left-closed at each start time.
class AccuracySchedule {
 public:
  using Step = std::pair<Seconds, Meters>;  // (start_time_s, requirement_m)

  explicit AccuracySchedule(std::vector<Step> steps);

  // 500, 300, 150, 120, 80, 50 m, changing every 600 s.
  static AccuracySchedule reference();
  static AccuracySchedule constant(Meters requirement);

  // `start:req,start:req,...`, e.g. `0:500,600:300`.
  static AccuracySchedule parse(std::string_view text);
  std::string format() const;

  Meters requirement_at(Seconds t) const;
  std::span<const Step> steps() const { return steps_; }

  friend bool operator==(const AccuracySchedule&, const AccuracySchedule&) = default;

 private:
  std::vector<Step> steps_;
};

// Adaptive selection, or a single pinned method (`fixed:<name>`).
struct StrategyKind {
  std::optional<std::string> fixed_method;

  static StrategyKind adaptive() { return {}; }
  static StrategyKind fixed(std::string name) { return {std::move(name)}; }
  static StrategyKind parse(std::string_view text);
  std::string to_string() const;

  friend bool operator==(const StrategyKind&, const StrategyKind&) = default;
};

struct SimulationConfig {
  MobilityParams mobility;
  StrategyConfig strategy;
  AccuracySchedule schedule = AccuracySchedule::reference();
  StrategyKind kind;

  void validate() const;
};

// Ordered so that sorting by (time, kind) gives the canonical log order.
enum class EventKind { ScheduleChange = 0, Fix = 1, VelocitySample = 2 };

std::string_view to_string(EventKind kind);
EventKind parse_event_kind(std::string_view text);

struct Event {
  Seconds time_s = 0.0;
  EventKind kind = EventKind::Fix;
  std::string method;                   // Fix only
  std::optional<Millijoules> energy_mJ; // Fix only
  std::optional<Meters> accuracy_m;     // Fix only; not serialized
  Meters position_m = 0.0;
  MetersPerSecond velocity_mps = 0.0;
  MetersPerSecond ve_mps = 0.0;         // estimator state after the event

  friend bool operator==(const Event&, const Event&) = default;
};

struct RunResult {
  Millijoules total_energy_mJ = 0.0;
  double satisfaction = 1.0;
  std::size_t fix_count = 0;
  std::size_t sample_count = 0;
  std::vector<Event> events;

  friend bool operator==(const RunResult&, const RunResult&) = default;
};

// Runs the strategy over [0, duration). A fix at t = 0 opens the first epoch;
// every schedule change inside the horizon forces an immediate fix. Events due
// at or after the horizon are not executed.
RunResult run(const SimulationConfig& config);

// Same, on a caller-provided trace (config.mobility is ignored).
RunResult run(const SimulationConfig& config, const MotionTrace& trace);

Millijoules total_energy(std::span<const Event> events);

// Fraction of [0, duration] during which the last fixed position, widened by
// the fixing method's accuracy, still meets the requirement in force:
// (position(t) - position(t_fix)) + a_M <= requirement(t). Fix events must
// carry accuracy_m. A zero-length horizon is fully satisfied.
double satisfaction_degree(std::span<const Event> events, const MotionTrace& trace,
                           const AccuracySchedule& schedule);

struct SweepRow {
  std::string kind;
  double alpha = 0.0;
  double beta = 0.0;
  std::uint64_t seed = 0;
  Millijoules total_energy_mJ = 0.0;
  double satisfaction = 0.0;
  std::size_t fix_count = 0;
  std::size_t sample_count = 0;

  friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

SweepRow summarize(const SimulationConfig& config, const RunResult& result);

struct SweepGrid {
  std::vector<double> alphas;
  std::vector<double> betas;
  std::vector<std::uint64_t> seeds;
  std::vector<StrategyKind> kinds;
};

// Cartesian product of runs in (kind, alpha, beta, seed) order. Cells are
// independent and run on up to `threads` workers (0 = hardware concurrency);
// row order does not depend on scheduling. Any invalid cell aborts the sweep
// with a ConfigError naming its coordinates.
std::vector<SweepRow> sweep(const SimulationConfig& base, const SweepGrid& grid, unsigned threads = 0);

struct MeanRow {
  std::string kind;
  double alpha = 0.0;
  double beta = 0.0;
  std::size_t runs = 0;
  Millijoules total_energy_mJ = 0.0;
  double satisfaction = 0.0;
  double fix_count = 0.0;
  double sample_count = 0.0;
};

// Per-(kind, alpha, beta) means over seeds, in first-appearance order.
std::vector<MeanRow> mean_rows(std::span<const SweepRow> rows);

struct FigurePoint {
  double beta = 0.0;
  double gps_value = 0.0;
  double ours_value = 0.0;
};

enum class FigureMetric { Energy, Satisfaction };

// Pairs the fixed(baseline) and adaptive mean series at one alpha, by beta.
std::vector<FigurePoint> figure_series(std::span<const MeanRow> means, double alpha, FigureMetric metric,
                                       std::string_view baseline_kind = "fixed:gps");

}  // namespace eloc
