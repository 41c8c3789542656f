#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gsos/search_space.hpp"

namespace gsos {

/// Outcome of one objective call. Simulated seconds come from a cost model;
/// wall seconds are what the call actually took.
struct EvalResult {
  double value = 0.0;
  double simulated_eval_seconds = 0.0;
  double wall_eval_seconds = 0.0;
};

using Objective = std::function<EvalResult(const Configuration&)>;

/// Adapts a plain loss function to an Objective with no modelled cost.
template <class F>
Objective value_objective(F f) {
  return [f = std::move(f)](const Configuration& c) { return EvalResult{static_cast<double>(f(c)), 0.0, 0.0}; };
}

inline const std::string kSimultaneousPhase = "simultaneous";

/// One evaluated configuration. Lower value is better.
struct Observation {
  Configuration config;
  double value = 0.0;
  double eval_seconds = 0.0;            // wall time of the objective call
  double simulated_eval_seconds = 0.0;  // modelled cost, 0 when not modelled
  double tpe_seconds = 0.0;             // split + fit + propose
  std::size_t iteration = 0;
  std::string phase = kSimultaneousPhase;
};

/// Thrown when an objective fails mid-run. Carries everything evaluated so far.
class OptimizationError : public std::runtime_error {
 public:
  OptimizationError(const std::string& what, std::vector<Observation> partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}

  const std::vector<Observation>& partial_history() const noexcept { return partial_; }

 private:
  std::vector<Observation> partial_;
};

}  // namespace gsos
