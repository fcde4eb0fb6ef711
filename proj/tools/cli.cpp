#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "eloc/config.hpp"
#include "eloc/csv_io.hpp"
#include "eloc/errors.hpp"
#include "eloc/simulator.hpp"

namespace eloc::cli {

namespace {

// Flags shared by every subcommand; unset flags leave the config untouched.
struct CommonFlags {
  std::optional<std::string> config;
  std::optional<std::string> seed, alpha, beta, duration, strategy;

  void attach(CLI::App* app) {
    app->add_option("--config", config, "key = value configuration file");
    app->add_option("--seed", seed, "mobility RNG seed");
    app->add_option("--alpha", alpha, "EWMA weight, 0 < alpha <= 1");
    app->add_option("--beta", beta, "sampling interval factor, 0 < beta <= 1");
    app->add_option("--duration", duration, "horizon in seconds");
    app->add_option("--strategy", strategy, "adaptive or fixed:<method>");
  }

  SimulationConfig resolve(std::ostream& err) const {
    SimulationConfig c = config ? load_config_file(*config) : default_config();
    if (seed) apply_setting(c, "seed", *seed);
    if (alpha) apply_setting(c, "alpha", *alpha);
    if (beta) apply_setting(c, "beta", *beta);
    if (duration) apply_setting(c, "duration_s", *duration);
    if (strategy) apply_setting(c, "strategy", *strategy);
    c.validate();
    err << "# effective configuration\n" << describe_config(c);
    return c;
  }
};

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", path));
  return out;
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw std::runtime_error(fmt::format("failed writing '{}'", path));
}

template <typename Writer>
void write_file(const std::string& path, Writer&& writer) {
  auto out = open_output(path);
  writer(out);
  finish(out, path);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Energy-aware localization scheduling simulator", "eloc"};
  app.require_subcommand(1);

  CommonFlags sim_flags;
  std::optional<std::string> sim_out, sim_trace_out;
  auto* simulate = app.add_subcommand("simulate", "Run one simulation; summary to stdout");
  sim_flags.attach(simulate);
  simulate->add_option("--out", sim_out, "event CSV path");
  simulate->add_option("--trace-out", sim_trace_out, "velocity trace CSV path");

  CommonFlags sweep_flags;
  std::string sweep_out;
  std::optional<std::string> alphas, betas, seeds, kinds;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run a parameter grid; summary and mean CSVs");
  sweep_flags.attach(sweep_cmd);
  sweep_cmd->add_option("--out", sweep_out, "summary CSV path")->required();
  sweep_cmd->add_option("--alphas", alphas, "start:stop:step or comma list");
  sweep_cmd->add_option("--betas", betas, "start:stop:step or comma list");
  sweep_cmd->add_option("--seeds", seeds, "a..b or comma list");
  sweep_cmd->add_option("--kinds", kinds, "comma list of adaptive / fixed:<method>");

  CommonFlags fig_flags;
  std::string fig_dir;
  auto* figures = app.add_subcommand("reproduce-figures", "Write fig2..fig5 mean-series CSVs");
  fig_flags.attach(figures);
  figures->add_option("--out", fig_dir, "output directory")->required();

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (simulate->parsed()) {
      const auto config = sim_flags.resolve(err);
      const auto trace = generate_trace(config.mobility);
      const auto result = eloc::run(config, trace);
      const SweepRow row = summarize(config, result);
      write_summary_csv(out, std::span(&row, 1));
      if (sim_out) write_file(*sim_out, [&](std::ostream& o) { write_events_csv(o, result.events); });
      if (sim_trace_out) write_file(*sim_trace_out, [&](std::ostream& o) { write_trace_csv(o, trace); });
    } else if (sweep_cmd->parsed()) {
      const auto base = sweep_flags.resolve(err);
      SweepGrid grid;
      grid.alphas = alphas ? parse_real_list(*alphas, "alphas") : std::vector{base.strategy.alpha};
      grid.betas = betas ? parse_real_list(*betas, "betas") : std::vector{base.strategy.beta};
      grid.seeds = seeds ? parse_seed_list(*seeds) : std::vector{base.mobility.seed};
      grid.kinds = kinds ? parse_kinds(*kinds) : std::vector{base.kind};
      const auto rows = eloc::sweep(base, grid);
      const auto means = mean_rows(rows);
      write_file(sweep_out, [&](std::ostream& o) { write_summary_csv(o, rows); });
      write_file(mean_csv_path(sweep_out), [&](std::ostream& o) { write_mean_csv(o, means); });
      err << fmt::format("# {} rows, {} mean rows\n", rows.size(), means.size());
    } else if (figures->parsed()) {
      const auto base = fig_flags.resolve(err);
      SweepGrid grid;
      grid.alphas = {0.5, 0.3};
      grid.betas = parse_real_list("0.1:1.0:0.1", "betas");
      grid.seeds = parse_seed_list("1..30");
      grid.kinds = {StrategyKind::adaptive(), StrategyKind::fixed("gps")};
      const auto means = mean_rows(eloc::sweep(base, grid));
      std::error_code ec;
      std::filesystem::create_directories(fig_dir, ec);
      if (ec) throw std::runtime_error(fmt::format("cannot create '{}': {}", fig_dir, ec.message()));
      struct Figure {
        const char* file;
        double alpha;
        FigureMetric metric;
      };
      for (const Figure& f : {Figure{"fig2.csv", 0.5, FigureMetric::Energy},
                              Figure{"fig3.csv", 0.5, FigureMetric::Satisfaction},
                              Figure{"fig4.csv", 0.3, FigureMetric::Energy},
                              Figure{"fig5.csv", 0.3, FigureMetric::Satisfaction}}) {
        const auto points = figure_series(means, f.alpha, f.metric);
        write_file((std::filesystem::path(fig_dir) / f.file).string(),
                   [&](std::ostream& o) { write_figure_csv(o, points); });
      }
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace eloc::cli
