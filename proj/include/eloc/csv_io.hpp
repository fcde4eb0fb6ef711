#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "eloc/mobility.hpp"
#include "eloc/simulator.hpp"

namespace eloc {

// All writers use '.' as decimal separator and '\n' line endings. Readers
// accept exactly what the writers produce and throw ConfigError otherwise.

// `t_s,velocity_mps`, one row per second, velocity with up to 6 decimals.
void write_trace_csv(std::ostream& out, const MotionTrace& trace);
// Duration and v0 come from the rows; the band and t1 from `params`.
MotionTrace read_trace_csv(std::istream& in, MobilityParams params);

// `kind,alpha,beta,seed,total_energy_mJ,satisfaction,fix_count,sample_count`
void write_summary_csv(std::ostream& out, std::span<const SweepRow> rows);
std::vector<SweepRow> read_summary_csv(std::istream& in);

// `kind,alpha,beta,runs,total_energy_mJ,satisfaction,fix_count,sample_count`
void write_mean_csv(std::ostream& out, std::span<const MeanRow> rows);

// `time_s,kind,method,energy_mJ,position_m,velocity_mps,ve_mps`; method and
// energy are empty on non-fix rows.
void write_events_csv(std::ostream& out, std::span<const Event> events);
// Fix accuracies are restored from `methods` by name.
std::vector<Event> read_events_csv(std::istream& in, std::span<const Method> methods);

// `beta,gps_value,ours_value`
void write_figure_csv(std::ostream& out, std::span<const FigurePoint> points);

// "runs/out.csv" -> "runs/out_mean.csv"
std::string mean_csv_path(const std::string& summary_path);

}  // namespace eloc
