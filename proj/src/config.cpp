#include "eloc/config.hpp"

#include <cmath>
#include <fstream>
#include <istream>

#include <fmt/format.h>

#include "eloc/errors.hpp"
#include "text_util.hpp"

namespace eloc {

SimulationConfig default_config() {
  SimulationConfig c;
  c.mobility = MobilityParams{};
  c.strategy = StrategyConfig{};
  c.schedule = AccuracySchedule::reference();
  c.kind = StrategyKind::adaptive();
  return c;
}

void apply_setting(SimulationConfig& c, std::string_view key, std::string_view value) {
  key = detail::trim(key);
  value = detail::trim(value);
  try {
    if (key == "duration_s") c.mobility.duration_s = detail::parse_int<std::int64_t>(value, key);
    else if (key == "t1_s") c.mobility.t1_s = detail::parse_int<std::int64_t>(value, key);
    else if (key == "v_min") c.mobility.v_min = detail::parse_double(value, key);
    else if (key == "v_max") c.mobility.v_max = detail::parse_double(value, key);
    else if (key == "v0") c.mobility.v0 = detail::parse_double(value, key);
    else if (key == "seed") c.mobility.seed = detail::parse_int<std::uint64_t>(value, key);
    else if (key == "alpha") c.strategy.alpha = detail::parse_double(value, key);
    else if (key == "beta") c.strategy.beta = detail::parse_double(value, key);
    else if (key == "t_min_refix_s") c.strategy.t_min_refix_s = detail::parse_double(value, key);
    else if (key == "strategy") c.kind = StrategyKind::parse(value);
    else if (key == "methods") c.strategy.methods = parse_methods(value);
    else if (key == "schedule") c.schedule = AccuracySchedule::parse(value);
    else throw ConfigError(fmt::format("unknown key '{}'", key));
  } catch (const ConfigError& e) {
    const std::string_view msg = e.what();
    if (msg.starts_with(key) || msg.starts_with("unknown key")) throw;
    throw ConfigError(fmt::format("{}: {}", key, msg));
  }
}

SimulationConfig parse_config(std::istream& in, SimulationConfig base) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view text = line;
    if (const auto hash = text.find('#'); hash != std::string_view::npos) text = text.substr(0, hash);
    text = detail::trim(text);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) throw ConfigError(fmt::format("config line {}: expected key = value", line_no));
    apply_setting(base, text.substr(0, eq), text.substr(eq + 1));
  }
  base.validate();
  return base;
}

SimulationConfig load_config_file(const std::string& path, SimulationConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("config: cannot open '{}'", path));
  return parse_config(in, std::move(base));
}

std::string describe_config(const SimulationConfig& c) {
  return fmt::format(
      "duration_s = {}\nt1_s = {}\nv_min = {}\nv_max = {}\nv0 = {}\nseed = {}\nalpha = {}\nbeta = {}\n"
      "t_min_refix_s = {}\nstrategy = {}\nmethods = {}\nschedule = {}\n",
      c.mobility.duration_s, c.mobility.t1_s, c.mobility.v_min, c.mobility.v_max, c.mobility.v0, c.mobility.seed,
      c.strategy.alpha, c.strategy.beta, c.strategy.t_min_refix_s, c.kind.to_string(),
      format_methods(c.strategy.methods), c.schedule.format());
}

std::vector<double> parse_real_list(std::string_view text, std::string_view what) {
  text = detail::trim(text);
  std::vector<double> values;
  const auto parts = detail::split(text, ':');
  if (parts.size() == 3) {
    const double start = detail::parse_double(parts[0], what);
    const double stop = detail::parse_double(parts[1], what);
    const double step = detail::parse_double(parts[2], what);
    if (!(step > 0.0) || stop < start) throw ConfigError(fmt::format("{}: bad range '{}'", what, text));
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    for (std::size_t i = 0; i < count; ++i) {
      values.push_back(std::round((start + static_cast<double>(i) * step) * 1e9) / 1e9);
    }
    return values;
  }
  if (parts.size() != 1) throw ConfigError(fmt::format("{}: bad range '{}'", what, text));
  for (auto item : detail::split(text, ',')) values.push_back(detail::parse_double(item, what));
  return values;
}

std::vector<std::uint64_t> parse_seed_list(std::string_view text) {
  text = detail::trim(text);
  std::vector<std::uint64_t> seeds;
  if (const auto dots = text.find(".."); dots != std::string_view::npos) {
    const auto a = detail::parse_int<std::uint64_t>(text.substr(0, dots), "seeds");
    const auto b = detail::parse_int<std::uint64_t>(text.substr(dots + 2), "seeds");
    if (b < a) throw ConfigError(fmt::format("seeds: empty range '{}'", text));
    for (auto s = a; s <= b; ++s) seeds.push_back(s);
    return seeds;
  }
  for (auto item : detail::split(text, ',')) seeds.push_back(detail::parse_int<std::uint64_t>(item, "seeds"));
  return seeds;
}

std::vector<StrategyKind> parse_kinds(std::string_view text) {
  std::vector<StrategyKind> kinds;
  for (auto item : detail::split(text, ',')) kinds.push_back(StrategyKind::parse(item));
  return kinds;
}

}  // namespace eloc
