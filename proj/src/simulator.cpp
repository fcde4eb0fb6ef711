#include "eloc/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <thread>
#include <tuple>

#include <fmt/format.h>

#include "eloc/errors.hpp"
#include "text_util.hpp"

namespace eloc {

AccuracySchedule::AccuracySchedule(std::vector<Step> steps) : steps_(std::move(steps)) {
  if (steps_.empty()) throw ConfigError("schedule: at least one step is required");
  if (steps_.front().first != 0.0) throw ConfigError("schedule: first start time must be 0");
  for (std::size_t i = 0; i < steps_.size(); ++i) {
    if (!(steps_[i].second > 0.0)) {
      throw ConfigError(fmt::format("schedule: requirement at {} must be > 0", steps_[i].first));
    }
    if (i > 0 && !(steps_[i].first > steps_[i - 1].first)) {
      throw ConfigError("schedule: start times must be strictly increasing");
    }
  }
}

AccuracySchedule AccuracySchedule::reference() {
  return AccuracySchedule({{0.0, 500.0}, {600.0, 300.0}, {1200.0, 150.0},
                           {1800.0, 120.0}, {2400.0, 80.0}, {3000.0, 50.0}});
}

AccuracySchedule AccuracySchedule::constant(Meters requirement) { return AccuracySchedule({{0.0, requirement}}); }

AccuracySchedule AccuracySchedule::parse(std::string_view text) {
  std::vector<Step> steps;
  for (auto item : detail::split(text, ',')) {
    item = detail::trim(item);
    if (item.empty()) continue;
    const auto parts = detail::split(item, ':');
    if (parts.size() != 2) throw ConfigError(fmt::format("schedule: '{}' is not start:requirement", item));
    steps.emplace_back(detail::parse_double(parts[0], "schedule start"),
                       detail::parse_double(parts[1], "schedule requirement"));
  }
  return AccuracySchedule(std::move(steps));
}

std::string AccuracySchedule::format() const {
  std::string out;
  for (const auto& [start, req] : steps_) {
    if (!out.empty()) out += ',';
    out += fmt::format("{}:{}", start, req);
  }
  return out;
}

Meters AccuracySchedule::requirement_at(Seconds t) const {
  const auto it = std::upper_bound(steps_.begin(), steps_.end(), t,
                                   [](Seconds value, const Step& s) { return value < s.first; });
  if (it == steps_.begin()) return steps_.front().second;
  return std::prev(it)->second;
}

StrategyKind StrategyKind::parse(std::string_view text) {
  text = detail::trim(text);
  if (text == "adaptive") return adaptive();
  if (text.starts_with("fixed:") && text.size() > 6) return fixed(std::string(text.substr(6)));
  throw ConfigError(fmt::format("strategy: '{}' is neither 'adaptive' nor 'fixed:<name>'", text));
}

std::string StrategyKind::to_string() const { return fixed_method ? "fixed:" + *fixed_method : "adaptive"; }

void SimulationConfig::validate() const {
  mobility.validate();
  strategy.validate();
  if (kind.fixed_method) {
    const bool known = std::any_of(strategy.methods.begin(), strategy.methods.end(),
                                   [&](const Method& m) { return m.name == *kind.fixed_method; });
    if (!known) throw ConfigError(fmt::format("strategy: unknown method '{}'", *kind.fixed_method));
  }
}

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::ScheduleChange: return "schedule_change";
    case EventKind::Fix: return "fix";
    case EventKind::VelocitySample: return "sample";
  }
  return "?";
}

EventKind parse_event_kind(std::string_view text) {
  if (text == "schedule_change") return EventKind::ScheduleChange;
  if (text == "fix") return EventKind::Fix;
  if (text == "sample") return EventKind::VelocitySample;
  throw ConfigError(fmt::format("unknown event kind '{}'", text));
}

RunResult run(const SimulationConfig& config) {
  config.validate();
  return run(config, generate_trace(config.mobility));
}

RunResult run(const SimulationConfig& config, const MotionTrace& trace) {
  config.strategy.validate();
  Scheduler scheduler(config.strategy, config.kind.fixed_method);
  const auto& schedule = config.schedule;
  const Seconds horizon = trace.duration();

  RunResult result;
  auto record = [&](Seconds t, EventKind kind) -> Event& {
    Event& e = result.events.emplace_back();
    e.time_s = t;
    e.kind = kind;
    e.position_m = trace.position_at(t);
    e.velocity_mps = trace.velocity_at(t);
    e.ve_mps = scheduler.state().v_e;
    return e;
  };
  auto fix = [&](Seconds t) -> FixDecision {
    const auto epoch = scheduler.begin_epoch(t, schedule.requirement_at(t), trace.velocity_at(t));
    Event& e = record(t, EventKind::Fix);
    e.method = epoch.method.name;
    e.energy_mJ = epoch.method.energy_mJ;
    e.accuracy_m = epoch.method.accuracy_m;
    ++result.fix_count;
    return epoch.next;
  };

  FixDecision next = fix(0.0);
  const auto steps = schedule.steps();
  std::size_t change = 1;  // steps[0] starts at 0 and is covered by the initial fix

  while (true) {
    const Seconds t_next = decision_time(next);
    const Seconds t_change = change < steps.size() ? steps[change].first : std::numeric_limits<Seconds>::infinity();
    if (!(std::min(t_next, t_change) < horizon)) break;

    if (t_change <= t_next) {
      record(t_change, EventKind::ScheduleChange);
      scheduler.on_requirement_change(t_change, steps[change].second);
      next = fix(t_change);
      ++change;
    } else if (std::holds_alternative<SampleAgainAt>(next)) {
      const auto decision = scheduler.on_velocity_sample(t_next, trace.velocity_at(t_next));
      record(t_next, EventKind::VelocitySample);
      ++result.sample_count;
      next = std::holds_alternative<FixNowAt>(decision) ? fix(t_next) : decision;
    } else {
      next = fix(t_next);
    }
  }

  std::stable_sort(result.events.begin(), result.events.end(), [](const Event& a, const Event& b) {
    return a.time_s < b.time_s || (a.time_s == b.time_s && a.kind < b.kind);
  });
  result.total_energy_mJ = total_energy(result.events);
  result.satisfaction = satisfaction_degree(result.events, trace, schedule);
  return result;
}

Millijoules total_energy(std::span<const Event> events) {
  Millijoules sum = 0.0;
  for (const auto& e : events) {
    if (e.kind == EventKind::Fix && e.energy_mJ) sum += *e.energy_mJ;
  }
  return sum;
}

double satisfaction_degree(std::span<const Event> events, const MotionTrace& trace,
                           const AccuracySchedule& schedule) {
  const Seconds horizon = trace.duration();
  if (horizon <= 0.0) return 1.0;

  std::vector<const Event*> fixes;
  for (const auto& e : events) {
    if (e.kind != EventKind::Fix) continue;
    if (!e.accuracy_m) throw InvalidState(fmt::format("fix at {} carries no method accuracy", e.time_s));
    fixes.push_back(&e);
  }
  std::stable_sort(fixes.begin(), fixes.end(), [](const Event* a, const Event* b) { return a->time_s < b->time_s; });
  if (fixes.empty() || fixes.front()->time_s > 0.0) throw InvalidState("satisfaction needs a fix at t = 0");

  const auto steps = schedule.steps();
  Seconds satisfied = 0.0;
  for (std::size_t i = 0; i < fixes.size(); ++i) {
    const Seconds start = fixes[i]->time_s;
    const Seconds end = std::min(i + 1 < fixes.size() ? fixes[i + 1]->time_s : horizon, horizon);
    if (!(start < end)) continue;
    const Meters origin = trace.position_at(start);
    const Meters accuracy = *fixes[i]->accuracy_m;

    // Walk the linear pieces: velocity changes only on integer seconds and the
    // requirement only on schedule start times.
    Seconds cur = start;
    while (cur < end) {
      Seconds piece_end = std::min(end, std::floor(cur) + 1.0);
      const auto s = std::upper_bound(steps.begin(), steps.end(), cur,
                                      [](Seconds value, const auto& step) { return value < step.first; });
      if (s != steps.end()) piece_end = std::min(piece_end, s->first);

      const MetersPerSecond v = trace.velocity_at(cur);
      const Meters slack = schedule.requirement_at(cur) - accuracy - (trace.position_at(cur) - origin);
      const Seconds length = piece_end - cur;
      if (slack >= 0.0) satisfied += (v <= 0.0 || v * length <= slack) ? length : slack / v;
      cur = piece_end;
    }
  }
  return std::clamp(satisfied / horizon, 0.0, 1.0);
}

SweepRow summarize(const SimulationConfig& config, const RunResult& result) {
  return {config.kind.to_string(), config.strategy.alpha,  config.strategy.beta, config.mobility.seed,
          result.total_energy_mJ,  result.satisfaction,    result.fix_count,     result.sample_count};
}

std::vector<SweepRow> sweep(const SimulationConfig& base, const SweepGrid& grid, unsigned threads) {
  if (grid.alphas.empty() || grid.betas.empty() || grid.seeds.empty() || grid.kinds.empty()) {
    throw ConfigError("sweep: alphas, betas, seeds and kinds must all be non-empty");
  }
  std::vector<SimulationConfig> cells;
  cells.reserve(grid.kinds.size() * grid.alphas.size() * grid.betas.size() * grid.seeds.size());
  for (const auto& kind : grid.kinds) {
    for (double alpha : grid.alphas) {
      for (double beta : grid.betas) {
        for (auto seed : grid.seeds) {
          SimulationConfig cell = base;
          cell.kind = kind;
          cell.strategy.alpha = alpha;
          cell.strategy.beta = beta;
          cell.mobility.seed = seed;
          try {
            cell.validate();
          } catch (const ConfigError& e) {
            throw ConfigError(fmt::format("sweep cell (kind={}, alpha={}, beta={}, seed={}): {}", kind.to_string(),
                                          alpha, beta, seed, e.what()));
          }
          cells.push_back(std::move(cell));
        }
      }
    }
  }

  std::vector<SweepRow> rows(cells.size());
  std::vector<std::exception_ptr> errors(cells.size());
  std::atomic<std::size_t> cursor{0};
  auto worker = [&] {
    for (std::size_t i = cursor++; i < cells.size(); i = cursor++) {
      try {
        rows[i] = summarize(cells[i], run(cells[i]));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, cells.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return rows;
}

std::vector<MeanRow> mean_rows(std::span<const SweepRow> rows) {
  std::vector<MeanRow> means;
  std::map<std::tuple<std::string, double, double>, std::size_t> index;
  for (const auto& r : rows) {
    const auto [it, inserted] = index.try_emplace({r.kind, r.alpha, r.beta}, means.size());
    if (inserted) means.push_back({r.kind, r.alpha, r.beta});
    MeanRow& m = means[it->second];
    ++m.runs;
    m.total_energy_mJ += r.total_energy_mJ;
    m.satisfaction += r.satisfaction;
    m.fix_count += static_cast<double>(r.fix_count);
    m.sample_count += static_cast<double>(r.sample_count);
  }
  for (auto& m : means) {
    const auto n = static_cast<double>(m.runs);
    m.total_energy_mJ /= n;
    m.satisfaction /= n;
    m.fix_count /= n;
    m.sample_count /= n;
  }
  return means;
}

std::vector<FigurePoint> figure_series(std::span<const MeanRow> means, double alpha, FigureMetric metric,
                                       std::string_view baseline_kind) {
  auto value = [&](const MeanRow& m) {
    return metric == FigureMetric::Energy ? m.total_energy_mJ : m.satisfaction;
  };
  auto same = [](double a, double b) { return std::abs(a - b) <= 1e-12; };
  std::vector<FigurePoint> points;
  for (const auto& ours : means) {
    if (ours.kind != "adaptive" || !same(ours.alpha, alpha)) continue;
    const auto base = std::find_if(means.begin(), means.end(), [&](const MeanRow& m) {
      return m.kind == baseline_kind && same(m.alpha, alpha) && same(m.beta, ours.beta);
    });
    if (base == means.end()) continue;
    points.push_back({ours.beta, value(*base), value(ours)});
  }
  std::sort(points.begin(), points.end(), [](const auto& a, const auto& b) { return a.beta < b.beta; });
  return points;
}

}  // namespace eloc
