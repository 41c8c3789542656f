// Command-line driver: run single strategies, compare grouped vs simultaneous,
// time the optimizer overhead, and print the canonical search space.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gsos/config_io.hpp"
#include "gsos/harness.hpp"
#include "gsos/report.hpp"

namespace {

using namespace gsos;

struct CommonOptions {
  std::string objective = "surrogate_cnn";
  std::size_t rounds = 5;
  std::size_t iters = 100;
  std::uint64_t seed = 0;
  std::string plan_file;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--objective", o.objective, "Benchmark objective (surrogate_cnn, sphere5)")->capture_default_str();
  cmd->add_option("--rounds", o.rounds, "Independent rounds per strategy")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--iters", o.iters, "Objective evaluations per round")->capture_default_str()->check(CLI::Range(10, 1000000));
  cmd->add_option("--seed", o.seed, "Base seed; round r uses seed + r")->capture_default_str();
  cmd->add_option("--plan", o.plan_file, "JSON file with importance weights and group layout")->check(CLI::ExistingFile);
}

ExperimentOptions experiment_options(const CommonOptions& o, Strategy strategy) {
  ExperimentOptions opts;
  opts.strategy = strategy;
  opts.rounds = o.rounds;
  opts.iters = o.iters;
  opts.base_seed = o.seed;
  if (!o.plan_file.empty()) {
    const json plan_json = read_json_file(o.plan_file);
    opts.plan = [plan_json](const BenchmarkObjective& bench, std::size_t iters) {
      return group_plan_from_json(plan_json, bench.space, iters);
    };
  }
  return opts;
}

std::vector<std::size_t> parse_dims(const std::string& text) {
  std::vector<std::size_t> dims;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto dash = item.find('-');
    if (dash != std::string::npos) {
      const std::size_t lo = std::stoul(item.substr(0, dash));
      const std::size_t hi = std::stoul(item.substr(dash + 1));
      if (lo == 0 || hi < lo) throw std::invalid_argument("bad dimension range '" + item + "'");
      for (std::size_t d = lo; d <= hi; ++d) dims.push_back(d);
    } else {
      const std::size_t d = std::stoul(item);
      if (d == 0) throw std::invalid_argument("dimensions must be >= 1");
      dims.push_back(d);
    }
  }
  if (dims.empty()) throw std::invalid_argument("no dimensions given");
  return dims;
}

void print_summary(std::ostream& out, const ComparisonSummary& s) {
  out << "objective " << s.objective_id << "\n";
  auto line = [&](const char* name, const StrategyAverages& a) {
    out << "  " << name << ": avg time to best " << format_real(a.time_to_best_seconds) << " s, avg total "
        << format_real(a.total_time_seconds) << " s, avg best value " << format_real(a.best_value) << "\n";
  };
  line("grouped_sequential", s.grouped);
  line("simultaneous", s.simultaneous);
  out << "  time reduction " << format_real(s.time_reduction_percent) << " %, time-to-best reduction "
      << format_real(s.time_to_best_reduction_percent) << " %, value change " << format_real(s.value_change) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Grouped sequential vs simultaneous TPE hyperparameter optimization"};
  app.set_config("--config", "", "TOML/INI file supplying any flag; command-line flags take precedence");
  app.require_subcommand(1);

  CommonOptions run_opts;
  std::string run_strategy = "simultaneous";
  std::string run_out;
  auto* run = app.add_subcommand("run", "Run one strategy and write the per-iteration CSV");
  run->add_option("--strategy", run_strategy, "grouped_sequential or simultaneous")
      ->capture_default_str()
      ->check(CLI::IsMember({"grouped_sequential", "grouped", "simultaneous"}));
  add_common(run, run_opts);
  run->add_option("--out", run_out, "Per-iteration CSV path")->required();

  CommonOptions cmp_opts;
  std::string cmp_out;
  auto* compare = app.add_subcommand("compare", "Run both strategies and write history, summary and scatter CSVs");
  add_common(compare, cmp_opts);
  compare->add_option("--out", cmp_out, "Output directory")->required();

  std::string dims_text = "1-12";
  std::size_t timing_iters = 100;
  double delay = 0.01;
  std::uint64_t timing_seed = 0;
  std::string timing_out;
  auto* timing = app.add_subcommand("timing", "Measure optimizer overhead against search-space dimension");
  timing->add_option("--dims", dims_text, "Dimensions, e.g. 1-12 or 1,2,4")->capture_default_str();
  timing->add_option("--iters", timing_iters, "Iterations per dimension")->capture_default_str()->check(CLI::PositiveNumber);
  timing->add_option("--delay", delay, "Seconds slept per evaluation")->capture_default_str()->check(CLI::NonNegativeNumber);
  timing->add_option("--seed", timing_seed, "Seed")->capture_default_str();
  timing->add_option("--out", timing_out, "CSV path (d, t_tpe_seconds)")->required();

  std::string space_format = "table";
  auto* spaces = app.add_subcommand("spaces", "Print the canonical 10-parameter CNN search space");
  spaces->add_option("--format", space_format, "table or json")->capture_default_str()->check(CLI::IsMember({"table", "json"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      const BenchmarkObjective bench = benchmark_by_id(run_opts.objective);
      const auto records = run_experiment(bench, experiment_options(run_opts, parse_strategy(run_strategy)));
      export_csv(run_out, [&](std::ostream& out) { write_history_csv(out, records, bench.space); });
      for (const auto& r : records) {
        std::cout << to_string(r.strategy) << " round " << r.round << " seed " << r.seed << ": best "
                  << format_real(r.best.value) << ", time to best " << format_real(r.time_to_best_seconds)
                  << " s, total " << format_real(r.total_time_seconds) << " s\n";
      }
    } else if (*compare) {
      const BenchmarkObjective bench = benchmark_by_id(cmp_opts.objective);
      const auto grouped = run_experiment(bench, experiment_options(cmp_opts, Strategy::grouped_sequential));
      const auto simultaneous = run_experiment(bench, experiment_options(cmp_opts, Strategy::simultaneous));
      std::vector<RunRecord> all = grouped;
      all.insert(all.end(), simultaneous.begin(), simultaneous.end());
      const ComparisonSummary summary = summarize(grouped, simultaneous);
      const std::filesystem::path dir(cmp_out);
      std::filesystem::create_directories(dir);
      export_csv((dir / "history.csv").string(), [&](std::ostream& out) { write_history_csv(out, all, bench.space); });
      export_csv((dir / "summary.csv").string(), [&](std::ostream& out) { write_summary_csv(out, summary); });
      export_csv((dir / "reduction.csv").string(), [&](std::ostream& out) { write_reduction_csv(out, summary); });
      const auto points = scatter_data(all);
      export_csv((dir / "scatter.csv").string(), [&](std::ostream& out) { write_scatter_csv(out, points); });
      print_summary(std::cout, summary);
    } else if (*timing) {
      const auto dims = parse_dims(dims_text);
      const auto rows = timing_study(dims, timing_iters, delay, timing_seed);
      export_csv(timing_out, [&](std::ostream& out) { write_timing_csv(out, rows); });
      write_timing_csv(std::cout, rows);
    } else if (*spaces) {
      const SearchSpace space = paper_search_space();
      if (space_format == "json") {
        std::cout << search_space_to_json(space).dump(2) << "\n";
      } else {
        for (const auto& p : space) {
          std::cout << p.name() << "\t" << to_string(p.kind()) << "\t";
          if (p.kind() == ParamKind::categorical) {
            std::string joined;
            for (const auto& c : p.choices()) joined += (joined.empty() ? "{" : ", ") + c;
            std::cout << joined << "}";
          } else {
            std::cout << "[" << format_value(p.kind() == ParamKind::integer
                                                 ? ParamValue(static_cast<std::int64_t>(p.low()))
                                                 : ParamValue(p.low()))
                      << ", "
                      << format_value(p.kind() == ParamKind::integer
                                          ? ParamValue(static_cast<std::int64_t>(p.high()))
                                          : ParamValue(p.high()))
                      << "]";
          }
          std::cout << "\tdefault " << format_value(p.default_value()) << "\n";
        }
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
