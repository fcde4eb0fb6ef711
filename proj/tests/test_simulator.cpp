#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

#include "eloc/errors.hpp"
#include "eloc/simulator.hpp"
#include "oracles.hpp"

using namespace eloc;

namespace {

SimulationConfig constant_setup(double beta, StrategyKind kind = StrategyKind::adaptive(), double req = 500) {
  SimulationConfig c;
  c.strategy.alpha = 0.5;
  c.strategy.beta = beta;
  c.schedule = AccuracySchedule::constant(req);
  c.kind = std::move(kind);
  return c;
}

std::vector<const Event*> fixes_of(const RunResult& r) {
  std::vector<const Event*> out;
  for (const auto& e : r.events) {
    if (e.kind == EventKind::Fix) out.push_back(&e);
  }
  return out;
}

Event fix_event(double t, const Method& m, double position = 0.0) {
  Event e;
  e.time_s = t;
  e.kind = EventKind::Fix;
  e.method = m.name;
  e.energy_mJ = m.energy_mJ;
  e.accuracy_m = m.accuracy_m;
  e.position_m = position;
  return e;
}

SimulationConfig random_config(std::mt19937_64& rng) {
  SimulationConfig c;
  c.mobility.seed = rng();
  c.mobility.v0 = static_cast<double>(std::uniform_int_distribution<int>(1, 10)(rng));
  c.strategy.alpha = std::uniform_real_distribution<double>(0.05, 1.0)(rng);
  c.strategy.beta = std::uniform_real_distribution<double>(0.05, 1.0)(rng);
  c.kind = rng() % 2 ? StrategyKind::adaptive() : StrategyKind::fixed("gps");
  return c;
}

}  // namespace

TEST_CASE("AccuracySchedule lookup and parsing") {
  const auto s = AccuracySchedule::reference();
  CHECK(s.requirement_at(0) == 500);
  CHECK(s.requirement_at(599.999) == 500);
  CHECK(s.requirement_at(600) == 300);
  CHECK(s.requirement_at(3599) == 50);
  CHECK(s.format() == "0:500,600:300,1200:150,1800:120,2400:80,3000:50");
  CHECK(AccuracySchedule::parse(s.format()) == s);
  CHECK_THROWS_AS(AccuracySchedule::parse("10:500"), ConfigError);
  CHECK_THROWS_AS(AccuracySchedule::parse("0:500,600:300,600:200"), ConfigError);
  CHECK_THROWS_AS(AccuracySchedule::parse("0:0"), ConfigError);
  CHECK_THROWS_AS(AccuracySchedule::parse("0:500,x"), ConfigError);
}

TEST_CASE("StrategyKind parsing") {
  CHECK(StrategyKind::parse("adaptive") == StrategyKind::adaptive());
  CHECK(StrategyKind::parse("fixed:gps") == StrategyKind::fixed("gps"));
  CHECK(StrategyKind::fixed("wifi").to_string() == "fixed:wifi");
  CHECK_THROWS_AS(StrategyKind::parse("fixed:"), ConfigError);
  CHECK_THROWS_AS(StrategyKind::parse("greedy"), ConfigError);
  SimulationConfig c;
  c.kind = StrategyKind::fixed("lte");
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("run: constant 5 m/s under a 500 m requirement, adaptive") {
  const auto r = run(constant_setup(1.0), constant_trace(3600, 5.0));
  const auto fixes = fixes_of(r);
  REQUIRE(fixes.size() == 52);
  for (std::size_t i = 0; i < fixes.size(); ++i) {
    CHECK(fixes[i]->time_s == 70.0 * static_cast<double>(i));
    CHECK(fixes[i]->method == "gsm");
  }
  CHECK(r.fix_count == 52);
  CHECK(r.total_energy_mJ == 1040.0);
  CHECK(r.satisfaction == 1.0);
}

TEST_CASE("run: constant 5 m/s under a 500 m requirement, fixed gps") {
  const auto r = run(constant_setup(1.0, StrategyKind::fixed("gps")), constant_trace(3600, 5.0));
  CHECK(r.fix_count == 37);
  CHECK(r.total_energy_mJ == 52725.0);
  CHECK(fixes_of(r).back()->time_s == 36 * 98.0);
  CHECK(r.satisfaction == 1.0);
}

TEST_CASE("run: zero-length horizon") {
  SimulationConfig c;
  c.mobility.duration_s = 0;
  const auto r = run(c);
  CHECK(r.fix_count == 1);
  CHECK(r.events.size() == 1);
  CHECK(r.satisfaction == 1.0);
  CHECK(r.total_energy_mJ == 20.0);  // gsm for 500 m
}

TEST_CASE("total_energy sums fix energies only") {
  const auto m = default_methods();
  std::vector<Event> events = {fix_event(0, m[0]), fix_event(5, m[0]), fix_event(9, m[2])};
  Event sample;
  sample.kind = EventKind::VelocitySample;
  sample.time_s = 3;
  events.push_back(sample);
  CHECK(total_energy(events) == 2870.0);
  CHECK(total_energy(std::vector<Event>{}) == 0.0);
  std::vector<Event> gsm(52, fix_event(0, m[2]));
  CHECK(total_energy(gsm) == 1040.0);
}

TEST_CASE("satisfaction_degree: linear crossing inside an epoch") {
  const Method m{"m", 50, 1};
  const auto trace = constant_trace(30, 2.0);
  const std::vector<Event> events = {fix_event(0, m)};
  // 2t + 50 <= 100 holds up to t = 25.
  CHECK(satisfaction_degree(events, trace, AccuracySchedule::constant(100)) == doctest::Approx(25.0 / 30.0));
  CHECK(oracle::grid_satisfaction(events, trace, AccuracySchedule::constant(100)) ==
        doctest::Approx(25.0 / 30.0).epsilon(1e-6));
}

TEST_CASE("satisfaction_degree: boundary counts as satisfied") {
  const Method m{"m", 50, 1};
  const auto trace = constant_trace(60, 2.0);
  const std::vector<Event> events = {fix_event(0, m), fix_event(25, m), fix_event(50, m)};
  CHECK(satisfaction_degree(events, trace, AccuracySchedule::constant(100)) == 1.0);
}

TEST_CASE("satisfaction_degree: accuracy above the requirement is never satisfied") {
  const Method coarse{"m", 150, 1};
  const auto trace = constant_trace(10, 1.0);
  CHECK(satisfaction_degree(std::vector{fix_event(0, coarse)}, trace, AccuracySchedule::constant(100)) == 0.0);
}

TEST_CASE("satisfaction_degree needs a fix at t = 0 with an accuracy") {
  const auto trace = constant_trace(10, 1.0);
  const Method m{"m", 1, 1};
  CHECK_THROWS_AS(satisfaction_degree(std::vector{fix_event(1, m)}, trace, AccuracySchedule::constant(5)),
                  InvalidState);
  auto e = fix_event(0, m);
  e.accuracy_m.reset();
  CHECK_THROWS_AS(satisfaction_degree(std::vector{e}, trace, AccuracySchedule::constant(5)), InvalidState);
}

TEST_CASE("satisfaction_degree agrees with the 1 ms grid oracle") {
  std::mt19937_64 rng(31337);
  for (int i = 0; i < 6; ++i) {
    auto c = random_config(rng);
    c.mobility.duration_s = 900;
    c.schedule = AccuracySchedule::parse("0:300,300:120,600:80");
    const auto trace = generate_trace(c.mobility);
    const auto r = run(c, trace);
    CHECK(std::abs(r.satisfaction - oracle::grid_satisfaction(r.events, trace, c.schedule)) <= 1e-4);
  }
}

TEST_CASE("schedule changes force a fix at each start time") {
  SimulationConfig c;
  c.strategy.beta = 0.3;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    c.mobility.seed = seed;
    const auto r = run(c);
    for (double t : {600.0, 1200.0, 1800.0, 2400.0, 3000.0}) {
      const auto at = std::find_if(r.events.begin(), r.events.end(), [&](const Event& e) { return e.time_s == t; });
      REQUIRE(at != r.events.end());
      CHECK(at->kind == EventKind::ScheduleChange);
      REQUIRE(std::next(at) != r.events.end());
      CHECK(std::next(at)->kind == EventKind::Fix);
      CHECK(std::next(at)->time_s == t);
    }
    // The 50 m epoch can only use gps.
    CHECK(fixes_of(r).back()->method == "gps");
  }
}

TEST_CASE("a schedule change coinciding with a due fix yields one fix") {
  auto c = constant_setup(1.0);
  c.schedule = AccuracySchedule::parse("0:500,70:300");
  const auto r = run(c, constant_trace(200, 5.0));
  int fixes_at_70 = 0, samples_at_70 = 0;
  for (const auto& e : r.events) {
    if (e.time_s != 70.0) continue;
    fixes_at_70 += e.kind == EventKind::Fix;
    samples_at_70 += e.kind == EventKind::VelocitySample;
  }
  CHECK(fixes_at_70 == 1);
  CHECK(samples_at_70 == 0);
}

TEST_CASE("events are in canonical order") {
  SimulationConfig c;
  c.strategy.beta = 0.2;
  const auto r = run(c);
  for (std::size_t i = 1; i < r.events.size(); ++i) {
    const auto& a = r.events[i - 1];
    const auto& b = r.events[i];
    CHECK((a.time_s < b.time_s || (a.time_s == b.time_s && a.kind <= b.kind)));
  }
}

TEST_CASE("fallback regime keeps re-fixing at the minimum interval") {
  auto c = constant_setup(1.0, StrategyKind::adaptive(), 5.0);
  c.strategy.t_min_refix_s = 2.5;
  const auto r = run(c, constant_trace(100, 3.0));
  const auto fixes = fixes_of(r);
  REQUIRE(fixes.size() == 40);
  for (std::size_t i = 0; i < fixes.size(); ++i) {
    CHECK(fixes[i]->time_s == 2.5 * static_cast<double>(i));
    CHECK(fixes[i]->method == "gps");
  }
  CHECK(r.sample_count == 0);
  CHECK(r.satisfaction == 0.0);
}

TEST_CASE("beta does not move fixes under constant velocity") {
  for (double v : {2.0, 5.0, 7.0}) {
    std::optional<double> energy;
    for (double beta : {0.1, 0.25, 0.5, 1.0}) {
      const auto r = run(constant_setup(beta), constant_trace(3600, v));
      if (!energy) energy = r.total_energy_mJ;
      CHECK(r.total_energy_mJ == *energy);

      // Every closed epoch (prev_fix, fix] holds exactly ceil(1/beta) samples;
      // the sample that triggers a fix shares its timestamp.
      const auto per_epoch = static_cast<std::size_t>(std::ceil(1.0 / beta - 1e-9));
      const auto fixes = fixes_of(r);
      for (std::size_t i = 1; i < fixes.size(); ++i) {
        const auto in_epoch = std::count_if(r.events.begin(), r.events.end(), [&](const Event& e) {
          return e.kind == EventKind::VelocitySample && e.time_s > fixes[i - 1]->time_s &&
                 e.time_s <= fixes[i]->time_s;
        });
        CHECK(static_cast<std::size_t>(in_epoch) == per_epoch);
      }
    }
  }
}

TEST_CASE("runs are replay-deterministic and energy is exact") {
  SimulationConfig c;
  c.mobility.seed = 17;
  c.strategy.beta = 0.4;
  const auto a = run(c);
  const auto b = run(c);
  CHECK(a == b);

  std::map<std::string, std::size_t> by_method;
  for (const auto& e : a.events) {
    if (e.kind == EventKind::Fix) ++by_method[e.method];
  }
  double expected = 0.0;
  for (const auto& m : c.strategy.methods) expected += static_cast<double>(by_method[m.name]) * m.energy_mJ;
  CHECK(a.total_energy_mJ == expected);
  CHECK(a.fix_count == by_method["gps"] + by_method["wifi"] + by_method["gsm"]);
}

TEST_CASE("sweep: ordering, single cell, threads") {
  SimulationConfig base;
  base.mobility.duration_s = 1200;
  SweepGrid grid{{0.3, 0.5}, {0.5, 1.0}, {1, 2, 3}, {StrategyKind::adaptive(), StrategyKind::fixed("gps")}};
  const auto rows = sweep(base, grid, 1);
  REQUIRE(rows.size() == 24);
  CHECK(rows.front().kind == "adaptive");
  CHECK(rows[1].seed == 2);
  CHECK(rows[3].beta == 1.0);
  CHECK(rows[6].alpha == 0.5);
  CHECK(rows[12].kind == "fixed:gps");
  CHECK(sweep(base, grid, 4) == rows);

  SimulationConfig cell = base;
  cell.strategy.alpha = 0.5;
  cell.strategy.beta = 1.0;
  cell.mobility.seed = 2;
  cell.kind = StrategyKind::fixed("gps");
  const auto single = sweep(base, {{0.5}, {1.0}, {2}, {StrategyKind::fixed("gps")}});
  REQUIRE(single.size() == 1);
  CHECK(single[0] == summarize(cell, run(cell)));
}

TEST_CASE("sweep: invalid cell names its coordinates") {
  SimulationConfig base;
  SweepGrid grid{{0.5}, {0.5, 1.5}, {1}, {StrategyKind::adaptive()}};
  CHECK_THROWS_WITH_AS(sweep(base, grid), doctest::Contains("beta=1.5"), ConfigError);
  CHECK_THROWS_AS(sweep(base, {{}, {0.5}, {1}, {StrategyKind::adaptive()}}), ConfigError);
}

TEST_CASE("mean_rows and figure_series") {
  const std::vector<SweepRow> rows = {
      {"adaptive", 0.5, 0.1, 1, 100, 0.9, 10, 50}, {"adaptive", 0.5, 0.1, 2, 200, 0.7, 20, 70},
      {"fixed:gps", 0.5, 0.1, 1, 1000, 0.8, 5, 40}, {"fixed:gps", 0.5, 0.1, 2, 3000, 0.6, 7, 60},
      {"adaptive", 0.3, 0.1, 1, 1, 1, 1, 1}};
  const auto means = mean_rows(rows);
  REQUIRE(means.size() == 3);
  CHECK(means[0].runs == 2);
  CHECK(means[0].total_energy_mJ == 150);
  CHECK(means[0].satisfaction == doctest::Approx(0.8));
  CHECK(means[0].sample_count == 60);
  const auto energy = figure_series(means, 0.5, FigureMetric::Energy);
  REQUIRE(energy.size() == 1);
  CHECK(energy[0].gps_value == 2000);
  CHECK(energy[0].ours_value == 150);
  CHECK(figure_series(means, 0.5, FigureMetric::Satisfaction)[0].gps_value == doctest::Approx(0.7));
  CHECK(figure_series(means, 0.3, FigureMetric::Energy).empty());
}
