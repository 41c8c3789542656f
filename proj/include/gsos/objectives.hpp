#pragma once

#include <chrono>
#include <cmath>
#include <map>
#include <memory>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "gsos/observation.hpp"
#include "gsos/search_space.hpp"

namespace gsos {

inline double sphere(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

/// x0..x{dims-1}, each continuous on [-bound, bound].
inline SearchSpace sphere_space(std::size_t dims, double bound = 5.0, double default_value = 2.5) {
  std::vector<ParamDomain> params;
  for (std::size_t i = 0; i < dims; ++i) {
    params.push_back(ParamDomain::continuous("x" + std::to_string(i), -bound, bound, default_value));
  }
  return SearchSpace(std::move(params));
}

inline Objective sphere_objective(const SearchSpace& space) {
  return [names = space.names()](const Configuration& c) {
    std::vector<double> x;
    x.reserve(names.size());
    for (const auto& n : names) x.push_back(c.numeric(n));
    return EvalResult{sphere(x), 0.0, 0.0};
  };
}

/// d parameters on [0, 1e6]; each call sleeps `delay` seconds and returns a
/// uniform draw from [0, 1) taken from the objective's own random stream.
struct DelayedRandomObjective {
  SearchSpace space;
  Objective objective;
};

inline DelayedRandomObjective delayed_random_objective(std::size_t d, double delay_seconds, std::uint64_t seed) {
  if (d == 0) throw std::invalid_argument("delayed_random_objective: d must be >= 1");
  if (!(delay_seconds >= 0.0)) throw std::invalid_argument("delayed_random_objective: delay must be >= 0");
  std::vector<ParamDomain> params;
  for (std::size_t i = 1; i <= d; ++i) params.push_back(ParamDomain::continuous("x" + std::to_string(i), 0.0, 1e6, 5e5));
  auto rng = std::make_shared<std::mt19937_64>(seed);
  Objective f = [rng, delay_seconds](const Configuration&) {
    using clock = std::chrono::steady_clock;
    const auto start = clock::now();
    if (delay_seconds > 0.0) std::this_thread::sleep_for(std::chrono::duration<double>(delay_seconds));
    const double value = std::uniform_real_distribution<double>(0.0, 1.0)(*rng);
    const double wall = std::chrono::duration<double>(clock::now() - start).count();
    return EvalResult{value, delay_seconds, wall};
  };
  return {SearchSpace(std::move(params)), std::move(f)};
}

/// Multiplicative evaluation-cost model:
/// base * (epoch / epoch_ref) * (1 + conv_step * (layers - 2)) * (batch_ref / batch)^batch_exponent.
struct CostModel {
  double base_seconds = 20.0;
  double epoch_ref = 10.0;
  double conv_step = 0.5;
  double batch_ref = 32.0;
  double batch_exponent = 0.15;

  double seconds(double epoch, double conv_layers, double batch_size) const {
    return base_seconds * (epoch / epoch_ref) * (1.0 + conv_step * (conv_layers - 2.0)) *
           std::pow(batch_ref / batch_size, batch_exponent);
  }

  void check() const {
    if (!(base_seconds > 0.0) || !(epoch_ref > 0.0) || !(conv_step > 0.0) || !(batch_ref > 0.0) ||
        !(batch_exponent >= 0.0)) {
      throw std::invalid_argument("CostModel: coefficients must be positive");
    }
  }
};

/// Analytic stand-in for "train a CNN and report validation loss" over the
/// 10-parameter CNN space. Separable: each numeric parameter contributes a
/// non-negative bowl or saturating term, each categorical a fixed offset.
struct SurrogateCoefficients {
  double base_loss = 0.20;

  // w * (exp(-rate * (c - 2)) - exp(-2 rate)) / (1 - exp(-2 rate)), zero at 4 layers
  double conv_weight = 0.10;
  double conv_rate = 1.0;

  // w * ((log10(lr) - centre) / half_width)^2
  double lr_weight = 0.08;
  double lr_log10_centre = -2.5;
  double lr_log10_half_width = 2.5;

  // w * ((dropout - centre) / half_width)^2
  double dropout_weight = 0.05;
  double dropout_centre = 0.45;
  double dropout_half_width = 0.45;

  // w * max(0, 1 - (epoch - 10) / (saturation - 10))^2, zero from `saturation` on
  double epoch_weight = 0.04;
  double epoch_saturation = 40.0;

  double stride_weight = 0.01;  // per unit of stride above 1

  double fc_weight = 0.006;
  double fc_centre = 160.0;
  double fc_half_width = 96.0;

  std::map<std::string, double> optimizer_offset{{"adam", 0.0}, {"sgd", 0.02}};
  std::map<std::string, double> padding_offset{{"valid", 0.008}, {"same", 0.0}};
  std::map<std::string, double> kernel_offset{{"3", 0.0}, {"5", 0.006}};
  std::map<std::string, double> batch_offset{{"32", 0.004}, {"64", 0.0}, {"128", 0.002}, {"256", 0.006}};

  friend bool operator==(const SurrogateCoefficients&, const SurrogateCoefficients&) = default;
};

namespace detail {

inline double saturating(double t, double rate) {
  return (std::exp(-rate * t) - std::exp(-rate)) / (1.0 - std::exp(-rate));
}

inline double offset_for(const std::map<std::string, double>& table, const std::string& label) {
  auto it = table.find(label);
  if (it == table.end()) throw std::invalid_argument("surrogate: no offset for '" + label + "'");
  return it->second;
}

}  // namespace detail

inline double surrogate_cnn_loss(const Configuration& c, const SurrogateCoefficients& k = {}) {
  const double conv = c.numeric("num_conv_layers");
  const double lr = c.numeric("lr");
  const double dropout = c.numeric("dropout_rate");
  const double epoch = c.numeric("epoch");
  const double stride = c.numeric("stride");
  const double fc = c.numeric("num_fc_units");

  double loss = k.base_loss;
  loss += k.conv_weight * detail::saturating((conv - 2.0) / 2.0, 2.0 * k.conv_rate);
  const double lr_z = (std::log10(lr) - k.lr_log10_centre) / k.lr_log10_half_width;
  loss += k.lr_weight * lr_z * lr_z;
  const double d_z = (dropout - k.dropout_centre) / k.dropout_half_width;
  loss += k.dropout_weight * d_z * d_z;
  const double e_gap = std::max(0.0, 1.0 - (epoch - 10.0) / (k.epoch_saturation - 10.0));
  loss += k.epoch_weight * e_gap * e_gap;
  loss += k.stride_weight * (stride - 1.0);
  const double fc_z = (fc - k.fc_centre) / k.fc_half_width;
  loss += k.fc_weight * fc_z * fc_z;
  loss += detail::offset_for(k.optimizer_offset, c.label("optimizer"));
  loss += detail::offset_for(k.padding_offset, c.label("padding"));
  loss += detail::offset_for(k.kernel_offset, c.label("kernel"));
  loss += detail::offset_for(k.batch_offset, c.label("batch_size"));
  return loss;
}

/// Deterministic loss plus modelled training time. Rejects configurations
/// outside the CNN space.
inline EvalResult surrogate_cnn_objective(const Configuration& config, const CostModel& cost = {},
                                          const SurrogateCoefficients& coefficients = {}) {
  static const SearchSpace space = paper_search_space();
  if (auto v = validate(config, space); !v) throw std::invalid_argument("surrogate_cnn_objective: " + v.describe());
  EvalResult r;
  r.value = surrogate_cnn_loss(config, coefficients);
  r.simulated_eval_seconds =
      cost.seconds(config.numeric("epoch"), config.numeric("num_conv_layers"), config.numeric("batch_size"));
  return r;
}

inline Objective make_surrogate_cnn_objective(CostModel cost = {}, SurrogateCoefficients coefficients = {}) {
  cost.check();
  return [cost, coefficients](const Configuration& c) { return surrogate_cnn_objective(c, cost, coefficients); };
}

/// The recorded minimizer of the default surrogate (see data/surrogate_cnn.json).
inline Configuration surrogate_cnn_minimizer() {
  return Configuration({
      {"num_conv_layers", std::int64_t{4}},
      {"lr", std::pow(10.0, -2.5)},
      {"dropout_rate", 0.45},
      {"optimizer", std::string("adam")},
      {"epoch", std::int64_t{100}},
      {"stride", std::int64_t{1}},
      {"padding", std::string("same")},
      {"kernel", std::string("3")},
      {"num_fc_units", std::int64_t{160}},
      {"batch_size", std::string("64")},
  });
}

inline constexpr double kSurrogateCnnMinimumLoss = 0.2;

/// Cumulative virtual time: modelled evaluation seconds plus optimizer seconds.
struct VirtualLedger {
  std::vector<double> elapsed;  // elapsed[i] = time after step i
  double total = 0.0;
};

inline VirtualLedger simulate_clock(std::span<const EvalResult> results) {
  VirtualLedger ledger;
  for (const auto& r : results) {
    ledger.total += r.simulated_eval_seconds;
    ledger.elapsed.push_back(ledger.total);
  }
  return ledger;
}

inline VirtualLedger simulate_clock(std::span<const Observation> history) {
  VirtualLedger ledger;
  for (const auto& o : history) {
    ledger.total += o.simulated_eval_seconds + o.tpe_seconds;
    ledger.elapsed.push_back(ledger.total);
  }
  return ledger;
}

}  // namespace gsos
