#include "eloc/strategy.hpp"

#include <algorithm>
#include <set>

#include <fmt/format.h>

#include "eloc/errors.hpp"
#include "text_util.hpp"

namespace eloc {

namespace {

// Accumulated range counts as reaching the budget within this relative slack,
// so that beta values like 0.1 (ten equal steps) do not miss the budget by
// one rounding error and take an extra sample.
constexpr double kBudgetRelTol = 1e-9;

}  // namespace

std::vector<Method> default_methods() {
  return {{"gps", 10.0, 1425.0}, {"wifi", 50.0, 545.0}, {"gsm", 150.0, 20.0}};
}

std::vector<Method> parse_methods(std::string_view text) {
  std::vector<Method> methods;
  for (auto item : detail::split(text, ';')) {
    item = detail::trim(item);
    if (item.empty()) continue;
    const auto parts = detail::split(item, ':');
    if (parts.size() != 3) {
      throw ConfigError(fmt::format("methods: '{}' is not name:accuracy_m:energy_mJ", item));
    }
    Method m;
    m.name = std::string(detail::trim(parts[0]));
    m.accuracy_m = detail::parse_double(parts[1], "methods accuracy");
    m.energy_mJ = detail::parse_double(parts[2], "methods energy");
    methods.push_back(std::move(m));
  }
  validate_methods(methods);
  return methods;
}

std::string format_methods(std::span<const Method> methods) {
  std::string out;
  for (const auto& m : methods) {
    if (!out.empty()) out += ';';
    out += fmt::format("{}:{}:{}", m.name, m.accuracy_m, m.energy_mJ);
  }
  return out;
}

void validate_methods(std::span<const Method> methods) {
  if (methods.empty()) throw ConfigError("methods: at least one method is required");
  std::set<std::string_view> names;
  for (const auto& m : methods) {
    if (m.name.empty()) throw ConfigError("methods: empty method name");
    if (!(m.accuracy_m > 0.0)) throw ConfigError(fmt::format("methods: {} accuracy must be > 0", m.name));
    if (!(m.energy_mJ > 0.0)) throw ConfigError(fmt::format("methods: {} energy must be > 0", m.name));
    if (!names.insert(m.name).second) throw ConfigError(fmt::format("methods: duplicate name {}", m.name));
  }
}

void StrategyConfig::validate() const {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("alpha must satisfy 0 < alpha ≤ 1");
  if (!(beta > 0.0 && beta <= 1.0)) throw ConfigError("beta must satisfy 0 < beta ≤ 1");
  if (!(t_min_refix_s > 0.0)) throw ConfigError("t_min_refix_s must be > 0");
  validate_methods(methods);
}

MetersPerSecond ewma_update(MetersPerSecond v_e_prev, MetersPerSecond v_new, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("alpha must satisfy 0 < alpha ≤ 1");
  return alpha * v_new + (1.0 - alpha) * v_e_prev;
}

std::optional<double> cost_rate(const Method& method, Meters a_t, MetersPerSecond v_e) {
  if (!(method.accuracy_m < a_t)) return std::nullopt;
  return method.energy_mJ / ((a_t - method.accuracy_m) / v_e);
}

std::optional<Method> select_method(std::span<const Method> methods, Meters a_t, MetersPerSecond v_e) {
  if (methods.empty()) throw ConfigError("methods: at least one method is required");
  const Method* best = nullptr;
  double best_rate = 0.0;
  for (const auto& m : methods) {
    const auto rate = cost_rate(m, a_t, v_e);
    if (!rate) continue;
    const bool better = best == nullptr || *rate < best_rate ||
                        (*rate == best_rate && (m.accuracy_m < best->accuracy_m ||
                                                (m.accuracy_m == best->accuracy_m && m.name < best->name)));
    if (better) {
      best = &m;
      best_rate = *rate;
    }
  }
  if (best == nullptr) return std::nullopt;
  return *best;
}

Seconds decision_time(const FixDecision& d) {
  return std::visit([](const auto& x) { return x.t; }, d);
}

Scheduler::Scheduler(StrategyConfig cfg, std::optional<std::string> pinned_method) : cfg_(std::move(cfg)) {
  cfg_.validate();
  if (pinned_method) {
    const auto it = std::find_if(cfg_.methods.begin(), cfg_.methods.end(),
                                 [&](const Method& m) { return m.name == *pinned_method; });
    if (it == cfg_.methods.end()) throw ConfigError(fmt::format("strategy: unknown method '{}'", *pinned_method));
    pinned_ = *it;
  }
}

std::pair<Method, bool> Scheduler::choose(Meters a_t, MetersPerSecond v_e) const {
  if (pinned_) return {*pinned_, !(pinned_->accuracy_m < a_t)};
  if (auto m = select_method(cfg_.methods, a_t, v_e)) return {std::move(*m), false};
  // Nothing beats the requirement: most accurate method, name breaks ties.
  const auto it = std::min_element(cfg_.methods.begin(), cfg_.methods.end(), [](const Method& a, const Method& b) {
    return a.accuracy_m < b.accuracy_m || (a.accuracy_m == b.accuracy_m && a.name < b.name);
  });
  return {*it, true};
}

EpochStart Scheduler::begin_epoch(Seconds t_fix, Meters a_t, MetersPerSecond v_sample) {
  if (!(a_t > 0.0)) throw ConfigError(fmt::format("accuracy requirement must be > 0, got {}", a_t));
  if (!(v_sample > 0.0)) throw InvalidState(fmt::format("velocity sample must be > 0, got {}", v_sample));

  state_.v_e = state_.initialized ? ewma_update(state_.v_e, v_sample, cfg_.alpha) : v_sample;
  state_.initialized = true;
  state_.r_i = 0.0;
  state_.last_fix_time = t_fix;
  state_.epoch_requirement_m = a_t;
  state_.samples_in_epoch = 0;

  auto [method, fallback] = choose(a_t, state_.v_e);
  state_.current_method = method;
  state_.fallback = fallback;
  state_.budget_m = a_t - method.accuracy_m;

  if (fallback) {
    state_.t_s = cfg_.t_min_refix_s;
    state_.pending_sample.reset();
    return {method, true, FixNowAt{t_fix + cfg_.t_min_refix_s, method}};
  }
  state_.t_s = state_.budget_m / state_.v_e;
  const Seconds next = t_fix + state_.t_s * cfg_.beta;
  state_.pending_sample = next;
  return {method, false, SampleAgainAt{next}};
}

FixDecision Scheduler::on_velocity_sample(Seconds t, MetersPerSecond v_sample) {
  if (!state_.initialized) throw InvalidState("velocity sample before the first fix");
  if (!state_.pending_sample) throw InvalidState("no velocity sample is scheduled");
  if (t != *state_.pending_sample) {
    throw InvalidState(fmt::format("velocity sample at {} but {} was scheduled", t, *state_.pending_sample));
  }
  if (!(v_sample > 0.0)) throw InvalidState(fmt::format("velocity sample must be > 0, got {}", v_sample));

  const Seconds step = state_.t_s * cfg_.beta;
  state_.v_e = ewma_update(state_.v_e, v_sample, cfg_.alpha);
  state_.r_i += state_.v_e * step;
  ++state_.samples_in_epoch;

  if (state_.r_i < state_.budget_m * (1.0 - kBudgetRelTol)) {
    state_.pending_sample = t + step;
    return SampleAgainAt{t + step};
  }
  state_.pending_sample.reset();
  return FixNowAt{t, state_.current_method};
}

FixNowAt Scheduler::on_requirement_change(Seconds t, Meters new_a_t) {
  if (!(new_a_t > 0.0)) throw ConfigError(fmt::format("accuracy requirement must be > 0, got {}", new_a_t));
  state_.pending_sample.reset();
  const MetersPerSecond v_e = state_.initialized ? state_.v_e : 1.0;
  return FixNowAt{t, choose(new_a_t, v_e).first};
}

}  // namespace eloc
