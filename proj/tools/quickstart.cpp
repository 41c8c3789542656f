// Minimal library usage: optimize the surrogate CNN objective once with plain
// TPE and once with three importance-ordered groups.

#include <iostream>
#include <random>

#include "gsos/grouped_sequential.hpp"
#include "gsos/objectives.hpp"
#include "gsos/tpe.hpp"

int main() {
  using namespace gsos;

  const SearchSpace space = paper_search_space();
  const Objective f = make_surrogate_cnn_objective();

  std::mt19937_64 rng(7);
  TpeSettings settings;
  settings.max_iter = 100;
  const OptimizationResult plain = optimize(f, space, settings, rng);
  std::cout << "simultaneous best loss " << plain.best.value << "\n";

  std::mt19937_64 rng2(7);
  const GroupPlan plan = paper_group_plan(100);
  const GroupedResult grouped = gsos_optimize(f, space, plan, default_config(space), TpeSettings{}, rng2);
  std::cout << "grouped final configuration:\n";
  for (const auto& [name, value] : grouped.optimal) std::cout << "  " << name << " = " << format_value(value) << "\n";
  std::cout << "loss " << f(grouped.optimal).value << "\n";
}
