#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "gsos/observation.hpp"
#include "gsos/search_space.hpp"
#include "gsos/tpe.hpp"

namespace gsos {

/// Importance weight per parameter name.
class ImportanceTable {
 public:
  ImportanceTable() = default;
  explicit ImportanceTable(std::map<std::string, double> weights) : weights_(std::move(weights)) {
    for (const auto& [name, w] : weights_) {
      if (!std::isfinite(w) || w < 0.0) {
        throw std::invalid_argument("importance weight of '" + name + "' must be finite and non-negative");
      }
    }
  }

  double weight(const std::string& name) const {
    auto it = weights_.find(name);
    if (it == weights_.end()) throw std::out_of_range("importance table has no weight for '" + name + "'");
    return it->second;
  }
  const std::map<std::string, double>& weights() const noexcept { return weights_; }

  /// Every parameter of the space must carry a weight.
  void check_covers(const SearchSpace& space) const {
    for (const auto& p : space) {
      if (!weights_.count(p.name())) throw std::invalid_argument("importance table is missing '" + p.name() + "'");
    }
  }

  /// Parameter names by descending weight; ties keep the space order.
  std::vector<std::string> ranked(const SearchSpace& space) const {
    check_covers(space);
    std::vector<std::string> names = space.names();
    std::stable_sort(names.begin(), names.end(),
                     [&](const std::string& a, const std::string& b) { return weight(a) > weight(b); });
    return names;
  }

 private:
  std::map<std::string, double> weights_;
};

// The six middle/low weights are not stated numerically anywhere we can
// cite; they are placeholders that keep the ranking and sum to one with the
// four known weights. data/paper_groups.json ships the same values.
inline ImportanceTable paper_importance_table() {
  return ImportanceTable({
      {"num_conv_layers", 0.385},
      {"lr", 0.228},
      {"dropout_rate", 0.131},
      {"optimizer", 0.070},
      {"epoch", 0.055},
      {"stride", 0.045},
      {"padding", 0.032},
      {"kernel", 0.022},
      {"num_fc_units", 0.017},
      {"batch_size", 0.015},
  });
}

inline std::string phase_label(std::size_t group_index) { return "group_" + std::to_string(group_index + 1); }

/// Ordered parameter groups with an iteration budget each.
struct GroupPlan {
  std::vector<std::vector<std::string>> groups;
  std::vector<std::size_t> budgets;

  std::size_t total_budget() const {
    std::size_t s = 0;
    for (auto b : budgets) s += b;
    return s;
  }

  /// Partition and budget checks against a space.
  void check(const SearchSpace& space) const {
    if (groups.empty()) throw std::invalid_argument("group plan has no groups");
    if (groups.size() != budgets.size()) throw std::invalid_argument("group plan needs one budget per group");
    std::set<std::string> seen;
    for (std::size_t k = 0; k < groups.size(); ++k) {
      if (groups[k].empty()) throw std::invalid_argument(phase_label(k) + " is empty");
      if (budgets[k] < 2) throw std::invalid_argument(phase_label(k) + " budget must be >= 2");
      for (const auto& name : groups[k]) {
        if (space.find(name) == nullptr) throw std::invalid_argument("group parameter '" + name + "' not in space");
        if (!seen.insert(name).second) throw std::invalid_argument("parameter '" + name + "' is in two groups");
      }
    }
    if (seen.size() != space.size()) throw std::invalid_argument("group plan does not cover every parameter");
  }

  /// Groups must be ordered by non-increasing maximum member importance.
  void check_order(const ImportanceTable& table) const {
    double prev = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < groups.size(); ++k) {
      double top = 0.0;
      for (const auto& n : groups[k]) top = std::max(top, table.weight(n));
      if (top > prev) throw std::invalid_argument(phase_label(k) + " is more important than an earlier group");
      prev = top;
    }
  }

  std::optional<std::size_t> group_of(const std::string& name) const {
    for (std::size_t k = 0; k < groups.size(); ++k) {
      if (std::find(groups[k].begin(), groups[k].end(), name) != groups[k].end()) return k;
    }
    return std::nullopt;
  }
};

/// Cut points giving k contiguous groups of near-equal size, with the larger
/// groups last. For 10 parameters and k = 3 this is {3, 6}.
inline std::vector<std::size_t> default_cut_points(std::size_t n, std::size_t k) {
  if (k == 0 || k > n) throw std::invalid_argument("group count must be in [1, number of parameters]");
  std::vector<std::size_t> cuts;
  const std::size_t base = n / k;
  const std::size_t extra = n % k;
  std::size_t pos = 0;
  for (std::size_t g = 0; g + 1 < k; ++g) {
    pos += base + (g >= k - extra ? 1 : 0);
    cuts.push_back(pos);
  }
  return cuts;
}

/// Splits total_iters by ratios: floor each share, last group takes the rest.
inline std::vector<std::size_t> split_budget(std::size_t total_iters, const std::vector<double>& ratios) {
  if (ratios.empty()) throw std::invalid_argument("ratios must not be empty");
  double sum = 0.0;
  for (double r : ratios) {
    if (!(r > 0.0) || !std::isfinite(r)) throw std::invalid_argument("ratios must be positive");
    sum += r;
  }
  std::vector<std::size_t> budgets;
  std::size_t used = 0;
  for (std::size_t i = 0; i + 1 < ratios.size(); ++i) {
    // The epsilon keeps exact shares such as 100 * 4 / 10 from flooring to 39.
    const auto b = static_cast<std::size_t>(std::floor(static_cast<double>(total_iters) * ratios[i] / sum + 1e-9));
    budgets.push_back(b);
    used += b;
  }
  if (used > total_iters) throw std::invalid_argument("ratios leave no budget for the last group");
  budgets.push_back(total_iters - used);
  return budgets;
}

inline GroupPlan build_group_plan(const ImportanceTable& table, const SearchSpace& space, std::size_t k,
                                  std::size_t total_iters, const std::vector<double>& ratios,
                                  std::optional<std::vector<std::size_t>> cut_points = std::nullopt) {
  if (k == 0 || k > space.size()) throw std::invalid_argument("group count must be in [1, number of parameters]");
  if (ratios.size() != k) throw std::invalid_argument("need exactly one ratio per group");
  const std::vector<std::string> ranked = table.ranked(space);
  const std::vector<std::size_t> cuts = cut_points ? *cut_points : default_cut_points(space.size(), k);
  if (cuts.size() + 1 != k) throw std::invalid_argument("need k - 1 cut points");
  std::size_t prev = 0;
  for (auto c : cuts) {
    if (c <= prev || c >= ranked.size()) throw std::invalid_argument("cut point " + std::to_string(c) + " out of range");
    prev = c;
  }

  GroupPlan plan;
  std::size_t begin = 0;
  for (std::size_t g = 0; g < k; ++g) {
    const std::size_t end = g + 1 < k ? cuts[g] : ranked.size();
    plan.groups.emplace_back(ranked.begin() + static_cast<std::ptrdiff_t>(begin),
                             ranked.begin() + static_cast<std::ptrdiff_t>(end));
    begin = end;
  }
  plan.budgets = split_budget(total_iters, ratios);
  plan.check(space);
  return plan;
}

/// Three groups, 4:3:3 of total_iters, over the CNN space.
inline GroupPlan paper_group_plan(std::size_t total_iters = 100) {
  return build_group_plan(paper_importance_table(), paper_search_space(), 3, total_iters, {4.0, 3.0, 3.0});
}

/// Overlays a (partial) assignment on a full configuration.
inline Configuration merge_over(const Configuration& frozen, const Configuration& assignment) {
  Configuration merged = frozen;
  for (const auto& [name, value] : assignment) merged.set(name, value);
  return merged;
}

/// Objective over the group's parameters only; everything else is taken from
/// `frozen`.
inline Objective restrict_objective(Objective f, Configuration frozen, std::vector<std::string> group) {
  return [f = std::move(f), frozen = std::move(frozen), group = std::move(group)](const Configuration& assignment) {
    for (const auto& [name, value] : assignment) {
      if (std::find(group.begin(), group.end(), name) == group.end()) {
        throw std::invalid_argument("parameter '" + name + "' is not in the active group");
      }
    }
    return f(merge_over(frozen, assignment));
  };
}

/// Initial random samples for a group of budget m: min(15, max(2, m / 3)).
inline std::size_t group_n_init(std::size_t budget) {
  return std::min<std::size_t>(15, std::max<std::size_t>(2, budget / 3));
}

struct GroupedResult {
  Configuration optimal;
  std::vector<Observation> history;
};

/// Runs TPE on each group in order with all other parameters frozen at the
/// current configuration, then writes the group's best values back.
/// History entries carry full configurations and global iteration indices.
template <class Rng>
GroupedResult gsos_optimize(const Objective& f, const SearchSpace& space, const GroupPlan& plan,
                            const Configuration& defaults, const TpeSettings& settings_template, Rng& rng) {
  plan.check(space);
  if (auto v = validate(defaults, space); !v) throw std::invalid_argument("invalid default configuration: " + v.describe());

  Configuration current = defaults;
  std::vector<Observation> history;
  history.reserve(plan.total_budget());

  for (std::size_t k = 0; k < plan.groups.size(); ++k) {
    const SearchSpace sub = space.subspace(plan.groups[k]);
    TpeSettings settings = settings_template;
    settings.max_iter = plan.budgets[k];
    settings.n_init = group_n_init(plan.budgets[k]);
    const std::string phase = phase_label(k);
    const std::size_t offset = history.size();

    auto lift = [&](std::vector<Observation> phase_history) {
      for (auto& o : phase_history) {
        o.config = merge_over(current, o.config);
        o.iteration += offset;
        history.push_back(std::move(o));
      }
    };

    OptimizationResult result;
    try {
      result = optimize(restrict_objective(f, current, sub.names()), sub, settings, rng, phase);
    } catch (const OptimizationError& e) {
      lift(e.partial_history());
      throw OptimizationError(phase + ": " + e.what(), std::move(history));
    }

    lift(std::move(result.history));
    for (const auto& [name, value] : result.best.config) current.set(name, value);
  }

  return {std::move(current), std::move(history)};
}

}  // namespace gsos
