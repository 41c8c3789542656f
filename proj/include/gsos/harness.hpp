#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gsos/grouped_sequential.hpp"
#include "gsos/objectives.hpp"
#include "gsos/observation.hpp"
#include "gsos/search_space.hpp"
#include "gsos/tpe.hpp"

namespace gsos {

enum class Strategy { grouped_sequential, simultaneous };

inline const char* to_string(Strategy s) {
  return s == Strategy::grouped_sequential ? "grouped_sequential" : "simultaneous";
}

inline Strategy parse_strategy(const std::string& text) {
  if (text == "grouped_sequential" || text == "grouped") return Strategy::grouped_sequential;
  if (text == "simultaneous") return Strategy::simultaneous;
  throw std::invalid_argument("unknown strategy '" + text + "'");
}

/// Everything the harness needs to know about a benchmark objective.
struct BenchmarkObjective {
  std::string id;
  SearchSpace space;
  Configuration defaults;
  ImportanceTable importance;
  std::function<Objective(std::uint64_t seed)> make;
};

inline BenchmarkObjective surrogate_cnn_benchmark(CostModel cost = {}, SurrogateCoefficients coefficients = {}) {
  SearchSpace space = paper_search_space();
  Configuration defaults = default_config(space);
  return {"surrogate_cnn", std::move(space), std::move(defaults), paper_importance_table(),
          [cost, coefficients](std::uint64_t) { return make_surrogate_cnn_objective(cost, coefficients); }};
}

/// 5-dimensional sphere; importance decreases with the coordinate index.
inline BenchmarkObjective sphere5_benchmark() {
  SearchSpace space = sphere_space(5);
  Configuration defaults = default_config(space);
  std::map<std::string, double> w;
  for (std::size_t i = 0; i < space.size(); ++i) w["x" + std::to_string(i)] = 1.0 / static_cast<double>(i + 1);
  return {"sphere5", space, std::move(defaults), ImportanceTable(std::move(w)),
          [space](std::uint64_t) { return sphere_objective(space); }};
}

inline BenchmarkObjective benchmark_by_id(const std::string& id) {
  if (id == "surrogate_cnn") return surrogate_cnn_benchmark();
  if (id == "sphere5") return sphere5_benchmark();
  throw std::invalid_argument("unknown objective '" + id + "' (known: surrogate_cnn, sphere5)");
}

struct RunRecord {
  Strategy strategy = Strategy::simultaneous;
  std::string objective_id;
  std::size_t round = 0;
  std::uint64_t seed = 0;
  std::vector<Observation> history;
  Observation best;
  double time_to_best_seconds = 0.0;
  double total_time_seconds = 0.0;
};

/// Fills best and the virtual-clock metrics from the history. Time to best is
/// the elapsed time through the first iteration that reached the minimum.
inline void finalize_record(RunRecord& r) {
  if (r.history.empty()) throw std::invalid_argument("run record has an empty history");
  const VirtualLedger ledger = simulate_clock(std::span<const Observation>(r.history));
  std::size_t best_idx = 0;
  for (std::size_t i = 1; i < r.history.size(); ++i) {
    if (r.history[i].value < r.history[best_idx].value) best_idx = i;
  }
  r.best = r.history[best_idx];
  r.time_to_best_seconds = ledger.elapsed[best_idx];
  r.total_time_seconds = ledger.total;
}

class ExperimentError : public std::runtime_error {
 public:
  ExperimentError(const std::string& what, std::vector<Observation> partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const std::vector<Observation>& partial_history() const noexcept { return partial_; }

 private:
  std::vector<Observation> partial_;
};

struct ExperimentOptions {
  Strategy strategy = Strategy::simultaneous;
  std::size_t rounds = 5;
  std::size_t iters = 100;
  std::uint64_t base_seed = 0;
  TpeSettings tpe{};
  /// Group plan for a given iteration count. Defaults to 3 groups at 4:3:3.
  std::function<GroupPlan(const BenchmarkObjective&, std::size_t)> plan;
};

inline GroupPlan default_plan(const BenchmarkObjective& bench, std::size_t iters) {
  const std::size_t k = std::min<std::size_t>(3, bench.space.size());
  std::vector<double> ratios = k == 3 ? std::vector<double>{4.0, 3.0, 3.0} : std::vector<double>(k, 1.0);
  return build_group_plan(bench.importance, bench.space, k, iters, ratios);
}

/// One record per round; round r runs with seed base_seed + r.
inline std::vector<RunRecord> run_experiment(const BenchmarkObjective& bench, const ExperimentOptions& opts) {
  if (opts.iters < 10) throw std::invalid_argument("run_experiment: iters must be >= 10");
  if (opts.rounds == 0) throw std::invalid_argument("run_experiment: rounds must be >= 1");
  std::vector<RunRecord> records;
  records.reserve(opts.rounds);
  for (std::size_t round = 0; round < opts.rounds; ++round) {
    RunRecord rec;
    rec.strategy = opts.strategy;
    rec.objective_id = bench.id;
    rec.round = round;
    rec.seed = opts.base_seed + round;
    std::mt19937_64 rng(rec.seed);
    const Objective f = bench.make(rec.seed);
    try {
      if (opts.strategy == Strategy::simultaneous) {
        TpeSettings s = opts.tpe;
        s.max_iter = opts.iters;
        s.n_init = std::min(s.n_init, opts.iters);
        rec.history = optimize(f, bench.space, s, rng).history;
      } else {
        const GroupPlan plan = opts.plan ? opts.plan(bench, opts.iters) : default_plan(bench, opts.iters);
        rec.history = gsos_optimize(f, bench.space, plan, bench.defaults, opts.tpe, rng).history;
      }
    } catch (const OptimizationError& e) {
      throw ExperimentError(std::string(to_string(opts.strategy)) + " round " + std::to_string(round) + " (seed " +
                                std::to_string(rec.seed) + "): " + e.what(),
                            e.partial_history());
    }
    finalize_record(rec);
    records.push_back(std::move(rec));
  }
  return records;
}

struct StrategyAverages {
  double time_to_best_seconds = 0.0;
  double total_time_seconds = 0.0;
  double best_value = 0.0;
  std::size_t runs = 0;
};

struct ComparisonSummary {
  std::string objective_id;
  StrategyAverages grouped;
  StrategyAverages simultaneous;
  double time_reduction_percent = 0.0;
  double time_to_best_reduction_percent = 0.0;
  double value_change = 0.0;  // grouped - simultaneous, on the loss scale
};

inline StrategyAverages average(std::span<const RunRecord> records) {
  if (records.empty()) throw std::invalid_argument("summarize: empty record list");
  StrategyAverages a;
  for (const auto& r : records) {
    a.time_to_best_seconds += r.time_to_best_seconds;
    a.total_time_seconds += r.total_time_seconds;
    a.best_value += r.best.value;
  }
  const double n = static_cast<double>(records.size());
  a.time_to_best_seconds /= n;
  a.total_time_seconds /= n;
  a.best_value /= n;
  a.runs = records.size();
  return a;
}

/// 100 * (1 - grouped / simultaneous); 0 when the baseline is not positive.
inline double reduction_percent(double grouped, double simultaneous) {
  return simultaneous > 0.0 ? 100.0 * (1.0 - grouped / simultaneous) : 0.0;
}

inline ComparisonSummary summarize(std::span<const RunRecord> grouped, std::span<const RunRecord> simultaneous) {
  ComparisonSummary s;
  s.grouped = average(grouped);
  s.simultaneous = average(simultaneous);
  s.objective_id = grouped.front().objective_id;
  s.time_reduction_percent = reduction_percent(s.grouped.total_time_seconds, s.simultaneous.total_time_seconds);
  s.time_to_best_reduction_percent =
      reduction_percent(s.grouped.time_to_best_seconds, s.simultaneous.time_to_best_seconds);
  s.value_change = s.grouped.best_value - s.simultaneous.best_value;
  return s;
}

struct TimingRow {
  std::size_t d = 0;
  double t_tpe_seconds = 0.0;
  double t_eval_seconds = 0.0;  // wall
  std::size_t iterations = 0;
};

/// Wall-clock TPE overhead on the delayed random objective, one row per d.
inline std::vector<TimingRow> timing_study(std::span<const std::size_t> d_values, std::size_t iters, double delay,
                                           std::uint64_t seed = 0, TpeSettings tpe = {}) {
  if (d_values.empty()) throw std::invalid_argument("timing_study: no dimensions given");
  std::vector<TimingRow> rows;
  for (std::size_t d : d_values) {
    auto bench = delayed_random_objective(d, delay, seed + d);
    std::mt19937_64 rng(seed + d);
    TpeSettings s = tpe;
    s.max_iter = iters;
    s.n_init = std::min(s.n_init, iters);
    const auto result = optimize(bench.objective, bench.space, s, rng);
    TimingRow row;
    row.d = d;
    row.iterations = result.history.size();
    for (const auto& o : result.history) {
      row.t_tpe_seconds += o.tpe_seconds;
      row.t_eval_seconds += o.eval_seconds;
    }
    rows.push_back(row);
  }
  return rows;
}

struct ScatterPoint {
  Strategy strategy = Strategy::simultaneous;
  std::size_t round = 0;
  std::size_t iteration = 0;
  double value = 0.0;
};

/// Raw (iteration, value) points behind accuracy-vs-iteration scatter plots.
inline std::vector<ScatterPoint> scatter_data(std::span<const RunRecord> records) {
  if (records.empty()) throw std::invalid_argument("scatter_data: empty record list");
  std::vector<ScatterPoint> out;
  for (const auto& r : records) {
    for (const auto& o : r.history) out.push_back({r.strategy, r.round, o.iteration, o.value});
  }
  return out;
}

}  // namespace gsos
