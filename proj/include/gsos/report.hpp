#pragma once

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gsos/harness.hpp"
#include "gsos/search_space.hpp"

// CSV writers. Floats use 10 significant digits; rows are ordered by
// strategy, round, then iteration.

namespace gsos {

inline std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::vector<const RunRecord*> ordered(std::span<const RunRecord> records) {
  std::vector<const RunRecord*> out;
  for (const auto& r : records) out.push_back(&r);
  std::stable_sort(out.begin(), out.end(), [](const RunRecord* a, const RunRecord* b) {
    if (a->strategy != b->strategy) return a->strategy < b->strategy;
    return a->round < b->round;
  });
  return out;
}

/// Per-iteration rows. tpe_seconds is the only wall-clock column.
inline void write_history_csv(std::ostream& out, std::span<const RunRecord> records, const SearchSpace& space) {
  out << "strategy,objective,round,seed,iteration,phase";
  for (const auto& p : space) out << ',' << csv_field(p.name());
  out << ",value,simulated_eval_seconds,tpe_seconds,running_best\n";
  for (const RunRecord* r : ordered(records)) {
    std::vector<const Observation*> rows;
    for (const auto& o : r->history) rows.push_back(&o);
    std::stable_sort(rows.begin(), rows.end(),
                     [](const Observation* a, const Observation* b) { return a->iteration < b->iteration; });
    double running = std::numeric_limits<double>::infinity();
    for (const Observation* o : rows) {
      running = std::min(running, o->value);
      out << to_string(r->strategy) << ',' << csv_field(r->objective_id) << ',' << r->round << ',' << r->seed << ','
          << o->iteration << ',' << csv_field(o->phase);
      for (const auto& p : space) out << ',' << csv_field(format_value(o->config.at(p.name())));
      out << ',' << format_real(o->value) << ',' << format_real(o->simulated_eval_seconds) << ','
          << format_real(o->tpe_seconds) << ',' << format_real(running) << '\n';
    }
  }
}

/// Per-strategy averages, one row per strategy.
inline void write_summary_csv(std::ostream& out, const ComparisonSummary& s) {
  out << "objective,strategy,runs,avg_time_to_best_seconds,avg_total_time_seconds,avg_best_value\n";
  auto row = [&](const char* name, const StrategyAverages& a) {
    out << csv_field(s.objective_id) << ',' << name << ',' << a.runs << ',' << format_real(a.time_to_best_seconds)
        << ',' << format_real(a.total_time_seconds) << ',' << format_real(a.best_value) << '\n';
  };
  row(to_string(Strategy::grouped_sequential), s.grouped);
  row(to_string(Strategy::simultaneous), s.simultaneous);
}

/// Relative change of grouped against simultaneous.
inline void write_reduction_csv(std::ostream& out, const ComparisonSummary& s) {
  out << "objective,time_reduction_percent,time_to_best_reduction_percent,value_change\n";
  out << csv_field(s.objective_id) << ',' << format_real(s.time_reduction_percent) << ','
      << format_real(s.time_to_best_reduction_percent) << ',' << format_real(s.value_change) << '\n';
}

inline void write_timing_csv(std::ostream& out, std::span<const TimingRow> rows) {
  out << "d,t_tpe_seconds\n";
  for (const auto& r : rows) out << r.d << ',' << format_real(r.t_tpe_seconds) << '\n';
}

inline void write_scatter_csv(std::ostream& out, std::span<const ScatterPoint> points) {
  out << "strategy,round,iteration,value\n";
  for (const auto& p : points) {
    out << to_string(p.strategy) << ',' << p.round << ',' << p.iteration << ',' << format_real(p.value) << '\n';
  }
}

/// Writes via `writer` to `path`, reporting failures with the path.
template <class Writer>
void export_csv(const std::string& path, Writer&& writer) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  writer(out);
  out.flush();
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace gsos
