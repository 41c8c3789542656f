#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gsos/density.hpp"
#include "gsos/observation.hpp"
#include "gsos/search_space.hpp"

namespace gsos {

struct TpeSettings {
  std::size_t n_init = 15;
  double gamma = 0.25;
  std::size_t n_candidates = 24;
  std::size_t max_iter = 100;
  DensityOptions density{};

  void check() const {
    if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("TpeSettings: gamma must lie in (0, 1)");
    if (n_init < 2) throw std::invalid_argument("TpeSettings: n_init must be >= 2");
    if (n_candidates < 1) throw std::invalid_argument("TpeSettings: n_candidates must be >= 1");
    if (max_iter < n_init) throw std::invalid_argument("TpeSettings: max_iter must be >= n_init");
  }
};

struct SplitResult {
  std::vector<Observation> good;
  std::vector<Observation> bad;
  double threshold = 0.0;
};

/// Number of observations that form the good set.
inline std::size_t good_count(std::size_t n, double gamma) {
  const auto k = static_cast<std::size_t>(std::ceil(gamma * static_cast<double>(n)));
  return std::min(n, std::max<std::size_t>(1, k));
}

/// Sorts by value (stable on insertion order) and returns the indices of the
/// good and bad sets.
inline std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_indices(
    std::span<const Observation> history, double gamma) {
  if (history.empty()) throw std::invalid_argument("split_by_quantile: empty history");
  std::vector<std::size_t> order(history.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return history[a].value < history[b].value; });
  const std::size_t k = good_count(history.size(), gamma);
  std::vector<std::size_t> bad(order.begin() + static_cast<std::ptrdiff_t>(k), order.end());
  order.resize(k);
  return {std::move(order), std::move(bad)};
}

inline SplitResult split_by_quantile(std::span<const Observation> history, double gamma) {
  auto [good_idx, bad_idx] = split_indices(history, gamma);
  SplitResult out;
  out.threshold = history[good_idx.back()].value;
  for (auto i : good_idx) out.good.push_back(history[i]);
  for (auto i : bad_idx) out.bad.push_back(history[i]);
  return out;
}

/// Per-parameter good/bad estimators, in the canonical parameter order of the
/// space they were fitted for.
class DensityModel {
 public:
  DensityModel(SearchSpace space, std::vector<DensityPair> pairs) : space_(std::move(space)), pairs_(std::move(pairs)) {
    if (pairs_.size() != space_.size()) throw std::invalid_argument("DensityModel: one pair per parameter required");
  }

  const SearchSpace& space() const noexcept { return space_; }
  std::size_t size() const noexcept { return pairs_.size(); }
  const DensityPair& operator[](std::size_t i) const { return pairs_[i]; }
  const DensityPair& at(const std::string& name) const {
    for (std::size_t i = 0; i < space_.size(); ++i) {
      if (space_.params()[i].name() == name) return pairs_[i];
    }
    throw std::out_of_range("DensityModel: no parameter '" + name + "'");
  }

 private:
  SearchSpace space_;
  std::vector<DensityPair> pairs_;
};

namespace detail {

inline DensityModel fit_model(std::span<const Observation> history, std::span<const std::size_t> good,
                              std::span<const std::size_t> bad, const SearchSpace& space,
                              const DensityOptions& options) {
  if (good.empty()) throw std::invalid_argument("build_density_model: good set is empty");
  std::vector<DensityPair> pairs;
  pairs.reserve(space.size());
  std::vector<ParamValue> values;
  for (const auto& p : space) {
    values.clear();
    for (auto i : good) values.push_back(history[i].config.at(p.name()));
    Estimator l = fit_estimator(values, p, options);
    values.clear();
    for (auto i : bad) values.push_back(history[i].config.at(p.name()));
    Estimator g = fit_estimator(values, p, options);
    pairs.push_back({std::move(l), std::move(g)});
  }
  return DensityModel(space, std::move(pairs));
}

}  // namespace detail

/// Fits l (good) and g (bad) for every parameter. An empty bad set gives
/// uniform g.
inline DensityModel build_density_model(const SplitResult& split, const SearchSpace& space,
                                        const DensityOptions& options = {}) {
  std::vector<Observation> all;
  all.reserve(split.good.size() + split.bad.size());
  all.insert(all.end(), split.good.begin(), split.good.end());
  all.insert(all.end(), split.bad.begin(), split.bad.end());
  std::vector<std::size_t> good(split.good.size());
  std::iota(good.begin(), good.end(), std::size_t{0});
  std::vector<std::size_t> bad(split.bad.size());
  std::iota(bad.begin(), bad.end(), split.good.size());
  return detail::fit_model(all, good, bad, space, options);
}

/// EI up to a constant factor: 1 / (gamma + (g / l)(1 - gamma)).
inline double acquisition_score(double l_val, double g_val, double gamma) {
  if (!(l_val > 0.0) || !(g_val > 0.0)) throw std::invalid_argument("acquisition_score: densities must be positive");
  return 1.0 / (gamma + (g_val / l_val) * (1.0 - gamma));
}

/// log of the product over parameters of l(h_j) / g(h_j).
inline double log_joint_ratio(const Configuration& config, const DensityModel& model) {
  double acc = 0.0;
  const auto& params = model.space().params();
  for (std::size_t i = 0; i < params.size(); ++i) {
    const auto& v = config.at(params[i].name());
    acc += log_density_at(model[i].good, v) - log_density_at(model[i].bad, v);
  }
  return acc;
}

inline double joint_ratio(const Configuration& config, const DensityModel& model) {
  return std::exp(log_joint_ratio(config, model));
}

/// Scores n_candidates draws from the good densities and keeps the one with
/// the largest l/g. Earliest draw wins ties.
template <class Rng>
Configuration propose(const DensityModel& model, const SearchSpace& space, const TpeSettings& settings, Rng& rng) {
  Configuration best;
  double best_score = -std::numeric_limits<double>::infinity();
  bool have_best = false;
  const auto& params = space.params();
  if (model.space() != space) throw std::invalid_argument("propose: model was fitted for a different space");
  for (std::size_t c = 0; c < settings.n_candidates; ++c) {
    Configuration candidate;
    for (std::size_t i = 0; i < params.size(); ++i) {
      candidate.set(params[i].name(), sample_from(model[i].good, params[i], rng));
    }
    const double score = log_joint_ratio(candidate, model);
    if (!have_best || score > best_score) {
      best = std::move(candidate);
      best_score = score;
      have_best = true;
    }
  }
  return best;
}

struct OptimizationResult {
  Observation best;
  std::vector<Observation> history;
};

inline const Observation& best_of(std::span<const Observation> history) {
  if (history.empty()) throw std::invalid_argument("best_of: empty history");
  const Observation* best = &history.front();
  for (const auto& o : history) {
    if (o.value < best->value) best = &o;
  }
  return *best;
}

/// Sequential TPE: n_init prior samples, then split, fit, propose and
/// evaluate until max_iter observations exist.
template <class Rng>
OptimizationResult optimize(const Objective& objective, const SearchSpace& space, const TpeSettings& settings,
                            Rng& rng, const std::string& phase = kSimultaneousPhase) {
  using clock = std::chrono::steady_clock;
  settings.check();
  std::vector<Observation> history;
  history.reserve(settings.max_iter);

  for (std::size_t it = 0; it < settings.max_iter; ++it) {
    Configuration next;
    double tpe_seconds = 0.0;
    if (it < settings.n_init) {
      next = sample_prior(space, rng);
    } else {
      const auto start = clock::now();
      auto [good, bad] = split_indices(history, settings.gamma);
      const DensityModel model = detail::fit_model(history, good, bad, space, settings.density);
      next = propose(model, space, settings, rng);
      tpe_seconds = std::chrono::duration<double>(clock::now() - start).count();
    }

    EvalResult result;
    const auto eval_start = clock::now();
    try {
      result = objective(next);
    } catch (const std::exception& e) {
      throw OptimizationError("objective failed at iteration " + std::to_string(it) + ": " + e.what(),
                              std::move(history));
    }
    const double wall = std::chrono::duration<double>(clock::now() - eval_start).count();
    if (!std::isfinite(result.value)) {
      throw OptimizationError("objective returned a non-finite value at iteration " + std::to_string(it),
                              std::move(history));
    }

    Observation obs;
    obs.config = std::move(next);
    obs.value = result.value;
    obs.eval_seconds = wall;
    obs.simulated_eval_seconds = result.simulated_eval_seconds;
    obs.tpe_seconds = tpe_seconds;
    obs.iteration = it;
    obs.phase = phase;
    history.push_back(std::move(obs));
  }

  OptimizationResult out;
  out.best = best_of(history);
  out.history = std::move(history);
  return out;
}

}  // namespace gsos
