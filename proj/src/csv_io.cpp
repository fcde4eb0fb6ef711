#include "eloc/csv_io.hpp"

#include <algorithm>
#include <istream>
#include <ostream>

#include <fmt/format.h>

#include "eloc/errors.hpp"
#include "text_util.hpp"

namespace eloc {

namespace {

std::string fixed6(double v) { return fmt::format("{:.6f}", v); }

std::string trimmed6(double v) {
  auto s = fixed6(v);
  s.erase(s.find_last_not_of('0') + 1);
  if (s.back() == '.') s.pop_back();
  if (s == "-0") s = "0";
  return s;
}

// Reads one line, requiring the given header; returns the data rows split on ','.
std::vector<std::vector<std::string>> read_rows(std::istream& in, std::string_view header, std::size_t columns) {
  std::string line;
  if (!std::getline(in, line) || detail::trim(line) != header) {
    throw ConfigError(fmt::format("csv: expected header '{}'", header));
  }
  std::vector<std::vector<std::string>> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    const auto fields = detail::split(detail::trim(line), ',');
    if (fields.size() != columns) {
      throw ConfigError(fmt::format("csv line {}: expected {} fields, got {}", line_no, columns, fields.size()));
    }
    rows.emplace_back(fields.begin(), fields.end());
  }
  return rows;
}

constexpr std::string_view kTraceHeader = "t_s,velocity_mps";
constexpr std::string_view kSummaryHeader = "kind,alpha,beta,seed,total_energy_mJ,satisfaction,fix_count,sample_count";
constexpr std::string_view kMeanHeader = "kind,alpha,beta,runs,total_energy_mJ,satisfaction,fix_count,sample_count";
constexpr std::string_view kEventHeader = "time_s,kind,method,energy_mJ,position_m,velocity_mps,ve_mps";
constexpr std::string_view kFigureHeader = "beta,gps_value,ours_value";

}  // namespace

void write_trace_csv(std::ostream& out, const MotionTrace& trace) {
  out << kTraceHeader << '\n';
  const auto v = trace.velocities();
  for (std::size_t t = 0; t < v.size(); ++t) out << t << ',' << trimmed6(v[t]) << '\n';
}

MotionTrace read_trace_csv(std::istream& in, MobilityParams params) {
  std::vector<MetersPerSecond> v;
  for (const auto& row : read_rows(in, kTraceHeader, 2)) {
    const auto t = detail::parse_int<std::size_t>(row[0], "t_s");
    if (t != v.size()) throw ConfigError(fmt::format("trace csv: expected t_s={}, got {}", v.size(), t));
    v.push_back(detail::parse_double(row[1], "velocity_mps"));
  }
  if (v.empty()) throw ConfigError("trace csv: no rows");
  params.duration_s = static_cast<std::int64_t>(v.size());
  params.v0 = v.front();
  return MotionTrace(params, std::move(v));
}

void write_summary_csv(std::ostream& out, std::span<const SweepRow> rows) {
  out << kSummaryHeader << '\n';
  for (const auto& r : rows) {
    out << fmt::format("{},{},{},{},{},{},{},{}\n", r.kind, fixed6(r.alpha), fixed6(r.beta), r.seed,
                       fixed6(r.total_energy_mJ), fixed6(r.satisfaction), r.fix_count, r.sample_count);
  }
}

std::vector<SweepRow> read_summary_csv(std::istream& in) {
  std::vector<SweepRow> rows;
  for (const auto& f : read_rows(in, kSummaryHeader, 8)) {
    SweepRow r;
    r.kind = StrategyKind::parse(f[0]).to_string();
    r.alpha = detail::parse_double(f[1], "alpha");
    r.beta = detail::parse_double(f[2], "beta");
    r.seed = detail::parse_int<std::uint64_t>(f[3], "seed");
    r.total_energy_mJ = detail::parse_double(f[4], "total_energy_mJ");
    r.satisfaction = detail::parse_double(f[5], "satisfaction");
    r.fix_count = detail::parse_int<std::size_t>(f[6], "fix_count");
    r.sample_count = detail::parse_int<std::size_t>(f[7], "sample_count");
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_mean_csv(std::ostream& out, std::span<const MeanRow> rows) {
  out << kMeanHeader << '\n';
  for (const auto& r : rows) {
    out << fmt::format("{},{},{},{},{},{},{},{}\n", r.kind, fixed6(r.alpha), fixed6(r.beta), r.runs,
                       fixed6(r.total_energy_mJ), fixed6(r.satisfaction), fixed6(r.fix_count),
                       fixed6(r.sample_count));
  }
}

void write_events_csv(std::ostream& out, std::span<const Event> events) {
  out << kEventHeader << '\n';
  for (const auto& e : events) {
    out << fmt::format("{},{},{},{},{},{},{}\n", fixed6(e.time_s), to_string(e.kind), e.method,
                       e.energy_mJ ? fixed6(*e.energy_mJ) : std::string(), fixed6(e.position_m),
                       fixed6(e.velocity_mps), fixed6(e.ve_mps));
  }
}

std::vector<Event> read_events_csv(std::istream& in, std::span<const Method> methods) {
  std::vector<Event> events;
  for (const auto& f : read_rows(in, kEventHeader, 7)) {
    Event e;
    e.time_s = detail::parse_double(f[0], "time_s");
    e.kind = parse_event_kind(f[1]);
    if (e.kind == EventKind::Fix) {
      e.method = f[2];
      e.energy_mJ = detail::parse_double(f[3], "energy_mJ");
      const auto m = std::find_if(methods.begin(), methods.end(), [&](const Method& x) { return x.name == e.method; });
      if (m != methods.end()) e.accuracy_m = m->accuracy_m;
    } else if (!f[2].empty() || !f[3].empty()) {
      throw ConfigError(fmt::format("event csv: {} row at {} carries method fields", f[1], f[0]));
    }
    e.position_m = detail::parse_double(f[4], "position_m");
    e.velocity_mps = detail::parse_double(f[5], "velocity_mps");
    e.ve_mps = detail::parse_double(f[6], "ve_mps");
    events.push_back(std::move(e));
  }
  return events;
}

void write_figure_csv(std::ostream& out, std::span<const FigurePoint> points) {
  out << kFigureHeader << '\n';
  for (const auto& p : points) {
    out << fmt::format("{},{},{}\n", fixed6(p.beta), fixed6(p.gps_value), fixed6(p.ours_value));
  }
}

std::string mean_csv_path(const std::string& summary_path) {
  const auto slash = summary_path.find_last_of('/');
  const auto dot = summary_path.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return summary_path + "_mean.csv";
  return summary_path.substr(0, dot) + "_mean" + summary_path.substr(dot);
}

}  // namespace eloc
