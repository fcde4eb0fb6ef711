#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "eloc/simulator.hpp"

namespace eloc {

// The reference setup: 3600 s horizon, T1 = 3 s, 1..10 m/s, GPS/WiFi/GSM,
// requirement 500/300/150/120/80/50 m every 600 s, adaptive strategy.
SimulationConfig default_config();

// Applies one `key = value` setting. Recognized keys: duration_s, t1_s, v_min,
// v_max, v0, seed, alpha, beta, t_min_refix_s, strategy, methods, schedule.
// Unknown keys and malformed values throw ConfigError naming the key.
void apply_setting(SimulationConfig& config, std::string_view key, std::string_view value);

// Flat `key = value` lines; blank lines and '#' comments are ignored. Keys not
// present keep their value from `base`. The result is validated.
SimulationConfig parse_config(std::istream& in, SimulationConfig base = default_config());
SimulationConfig load_config_file(const std::string& path, SimulationConfig base = default_config());

// The effective configuration in the same `key = value` format.
std::string describe_config(const SimulationConfig& config);

// `start:stop:step` (inclusive, values snapped to 1e-9) or a comma list.
std::vector<double> parse_real_list(std::string_view text, std::string_view what);
// `a..b` (inclusive) or a comma list.
std::vector<std::uint64_t> parse_seed_list(std::string_view text);
// Comma list of `adaptive` / `fixed:<name>`.
std::vector<StrategyKind> parse_kinds(std::string_view text);

}  // namespace eloc
