#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "gsos/search_space.hpp"

namespace gsos {

/// Standard normal kernel.
inline double gaussian_kernel(double u) noexcept {
  return std::numbers::inv_sqrtpi / std::numbers::sqrt2 * std::exp(-0.5 * u * u);
}

/// Scott's rule, floored at 1e-3 of the domain width.
inline double select_bandwidth(std::span<const double> samples, double domain_width) {
  if (samples.empty()) throw std::invalid_argument("select_bandwidth: no samples");
  if (!(domain_width > 0.0)) throw std::invalid_argument("select_bandwidth: domain width must be positive");
  const double n = static_cast<double>(samples.size());
  double sigma = 0.0;
  if (samples.size() > 1) {
    double mean = 0.0;
    for (double s : samples) mean += s;
    mean /= n;
    double ss = 0.0;
    for (double s : samples) ss += (s - mean) * (s - mean);
    sigma = std::sqrt(ss / (n - 1.0));
  }
  return std::max(sigma * std::pow(n, -0.2), 1e-3 * domain_width);
}

enum class Transform { identity, log10 };

/// Folds u back into [low, high] by mirroring at the bounds.
inline double reflect_into(double u, double low, double high) {
  const double width = high - low;
  if (!(width > 0.0)) return low;
  double m = std::fmod(u - low, 2.0 * width);
  if (m < 0.0) m += 2.0 * width;
  if (m > width) m = 2.0 * width - m;
  return low + m;
}

/// Gaussian Parzen-window estimate over one numeric variable. Samples and
/// bandwidth live in the transformed scale; queries are transformed first.
class NumericKde {
 public:
  NumericKde(std::vector<double> samples, double bandwidth, Transform transform = Transform::identity)
      : transform_(transform), bandwidth_(bandwidth) {
    if (samples.empty()) throw std::invalid_argument("NumericKde: sample list is empty");
    if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
      throw std::invalid_argument("NumericKde: bandwidth must be positive and finite");
    }
    samples_.reserve(samples.size());
    for (double s : samples) {
      double t = apply(s);
      if (!std::isfinite(t)) throw std::invalid_argument("NumericKde: non-finite sample");
      samples_.push_back(t);
    }
  }

  /// Fits on raw samples with the Scott-rule bandwidth for the domain. With
  /// `adaptive_floor` the bandwidth is additionally kept at or above
  /// width / min(100, n + 1).
  static NumericKde fit(std::span<const double> raw, const ParamDomain& domain, bool adaptive_floor = false) {
    const Transform t = domain.kind() == ParamKind::log_continuous ? Transform::log10 : Transform::identity;
    std::vector<double> scaled;
    scaled.reserve(raw.size());
    for (double x : raw) scaled.push_back(domain.to_search_scale(x));
    double width = domain.search_width();
    if (!(width > 0.0)) width = 1.0;
    double h = select_bandwidth(scaled, width);
    if (adaptive_floor) h = std::max(h, width / std::min(100.0, static_cast<double>(raw.size()) + 1.0));
    NumericKde kde(std::vector<double>(raw.begin(), raw.end()), h, t);
    kde.set_bounds(domain.search_low(), domain.search_high());
    return kde;
  }

  void set_bounds(double low, double high) {
    if (low > high) throw std::invalid_argument("NumericKde: bounds out of order");
    low_ = low;
    high_ = high;
    bounded_ = true;
  }

  double estimate(double x) const { return estimate_transformed(apply(x)); }

  double estimate_transformed(double u) const {
    double sum = 0.0;
    for (double s : samples_) sum += gaussian_kernel((u - s) / bandwidth_);
    return sum / (static_cast<double>(samples_.size()) * bandwidth_);
  }

  double log_estimate(double x) const { return log_estimate_transformed(apply(x)); }

  /// Log-density via log-sum-exp; stays finite far from every sample.
  double log_estimate_transformed(double u) const {
    double min_sq = std::numeric_limits<double>::infinity();
    for (double s : samples_) {
      const double z = (u - s) / bandwidth_;
      min_sq = std::min(min_sq, z * z);
    }
    double sum = 0.0;
    for (double s : samples_) {
      const double z = (u - s) / bandwidth_;
      sum += std::exp(-0.5 * (z * z - min_sq));
    }
    return std::log(sum) - 0.5 * min_sq - 0.5 * std::log(2.0 * std::numbers::pi) -
           std::log(static_cast<double>(samples_.size()) * bandwidth_);
  }

  /// Draws in the transformed scale: a random kernel centre plus Gaussian
  /// noise, reflected at the bounds when they are set.
  template <class Rng>
  double sample_transformed(Rng& rng) const {
    std::uniform_int_distribution<std::size_t> pick(0, samples_.size() - 1);
    const double centre = samples_[pick(rng)];
    double u = centre + bandwidth_ * std::normal_distribution<double>(0.0, 1.0)(rng);
    return bounded_ ? reflect_into(u, low_, high_) : u;
  }

  template <class Rng>
  double sample(Rng& rng) const {
    return invert(sample_transformed(rng));
  }

  std::span<const double> samples() const noexcept { return samples_; }
  double bandwidth() const noexcept { return bandwidth_; }
  Transform transform() const noexcept { return transform_; }

 private:
  double apply(double x) const { return transform_ == Transform::log10 ? std::log10(x) : x; }
  double invert(double u) const { return transform_ == Transform::log10 ? std::pow(10.0, u) : u; }

  std::vector<double> samples_;
  Transform transform_;
  double bandwidth_;
  bool bounded_ = false;
  double low_ = 0.0;
  double high_ = 0.0;
};

/// Density evaluated at an integer point by relaxing it to the reals.
inline double integer_density(const NumericKde& kde, std::int64_t k) { return kde.estimate(static_cast<double>(k)); }

/// Smoothed category frequencies. Every choice keeps positive mass.
class CategoricalPmf {
 public:
  CategoricalPmf(std::vector<std::string> choices, std::vector<double> weights)
      : choices_(std::move(choices)), weights_(std::move(weights)) {
    if (choices_.empty() || choices_.size() != weights_.size()) {
      throw std::invalid_argument("CategoricalPmf: choices and weights must be non-empty and aligned");
    }
  }

  double weight(const std::string& label) const {
    for (std::size_t i = 0; i < choices_.size(); ++i) {
      if (choices_[i] == label) return weights_[i];
    }
    throw std::invalid_argument("CategoricalPmf: unknown category '" + label + "'");
  }

  template <class Rng>
  const std::string& sample(Rng& rng) const {
    std::discrete_distribution<std::size_t> pick(weights_.begin(), weights_.end());
    return choices_[pick(rng)];
  }

  const std::vector<std::string>& choices() const noexcept { return choices_; }
  const std::vector<double>& weights() const noexcept { return weights_; }

 private:
  std::vector<std::string> choices_;
  std::vector<double> weights_;
};

inline CategoricalPmf fit_categorical(std::span<const std::string> values, const ParamDomain& domain,
                                      double smoothing = 1.0) {
  if (domain.kind() != ParamKind::categorical) {
    throw std::invalid_argument("fit_categorical: domain '" + domain.name() + "' is not categorical");
  }
  if (!(smoothing > 0.0)) throw std::invalid_argument("fit_categorical: smoothing must be positive");
  const auto& choices = domain.choices();
  std::vector<double> counts(choices.size(), 0.0);
  for (const auto& v : values) {
    auto idx = domain.choice_index(v);
    if (!idx) throw std::invalid_argument("fit_categorical: '" + v + "' is not a choice of '" + domain.name() + "'");
    counts[*idx] += 1.0;
  }
  const double denom = static_cast<double>(values.size()) + smoothing * static_cast<double>(choices.size());
  for (auto& c : counts) c = (c + smoothing) / denom;
  return CategoricalPmf(choices, std::move(counts));
}

/// Uniform density over a numeric domain in its search scale; stands in for
/// an estimator fitted on an empty set.
class UniformDensity {
 public:
  UniformDensity(double low, double high, Transform transform = Transform::identity)
      : low_(low), high_(high), transform_(transform) {
    if (low > high) throw std::invalid_argument("UniformDensity: bounds out of order");
  }

  double estimate(double x) const {
    const double u = transform_ == Transform::log10 ? std::log10(x) : x;
    const double width = high_ - low_;
    if (!(width > 0.0)) return 1.0;
    return (u >= low_ && u <= high_) ? 1.0 / width : 0.0;
  }

  template <class Rng>
  double sample(Rng& rng) const {
    if (!(high_ > low_)) return invert(low_);
    return invert(std::uniform_real_distribution<double>(low_, high_)(rng));
  }

  double low() const noexcept { return low_; }
  double high() const noexcept { return high_; }

 private:
  double invert(double u) const { return transform_ == Transform::log10 ? std::pow(10.0, u) : u; }

  double low_;
  double high_;
  Transform transform_;
};

/// KDE mixed with a uniform prior over the domain:
/// (n * kde(x) + w * uniform(x)) / (n + w).
class PriorMixedKde {
 public:
  PriorMixedKde(NumericKde kde, UniformDensity prior, double prior_weight)
      : kde_(std::move(kde)), prior_(prior), prior_weight_(prior_weight) {
    if (!(prior_weight > 0.0)) throw std::invalid_argument("PriorMixedKde: prior weight must be positive");
  }

  double estimate(double x) const {
    const double n = static_cast<double>(kde_.samples().size());
    return (n * kde_.estimate(x) + prior_weight_ * prior_.estimate(x)) / (n + prior_weight_);
  }

  double log_estimate(double x) const {
    const double n = static_cast<double>(kde_.samples().size());
    const double a = std::log(n) + kde_.log_estimate(x);
    const double p = prior_.estimate(x);
    if (!(p > 0.0)) return a - std::log(n + prior_weight_);
    const double b = std::log(prior_weight_ * p);
    const double hi = std::max(a, b);
    return hi + std::log(std::exp(a - hi) + std::exp(b - hi)) - std::log(n + prior_weight_);
  }

  /// Transformed-scale draw: from the prior with probability w / (n + w),
  /// otherwise from the KDE.
  template <class Rng>
  double sample_transformed(Rng& rng) const {
    const double n = static_cast<double>(kde_.samples().size());
    if (std::uniform_real_distribution<double>(0.0, 1.0)(rng) * (n + prior_weight_) < prior_weight_) {
      if (!(prior_.high() > prior_.low())) return prior_.low();
      return std::uniform_real_distribution<double>(prior_.low(), prior_.high())(rng);
    }
    return kde_.sample_transformed(rng);
  }

  const NumericKde& kde() const noexcept { return kde_; }
  const UniformDensity& prior() const noexcept { return prior_; }
  double prior_weight() const noexcept { return prior_weight_; }

 private:
  NumericKde kde_;
  UniformDensity prior_;
  double prior_weight_;
};

using Estimator = std::variant<NumericKde, CategoricalPmf, UniformDensity, PriorMixedKde>;

/// How numeric estimators are fitted inside the optimizer. With both fields
/// zeroed a numeric estimator is the bare Scott-rule KDE.
struct DensityOptions {
  double prior_weight = 1.0;   // weight of the uniform component, 0 disables it
  bool adaptive_floor = true;  // bandwidth >= width / min(100, n + 1)
};

/// Prior-uniform estimator over a domain.
inline Estimator uniform_estimator(const ParamDomain& domain) {
  if (domain.kind() == ParamKind::categorical) {
    return fit_categorical(std::span<const std::string>{}, domain);
  }
  return UniformDensity(domain.search_low(), domain.search_high(),
                        domain.kind() == ParamKind::log_continuous ? Transform::log10 : Transform::identity);
}

/// Fits an estimator for one parameter; an empty value list yields the
/// uniform prior density.
inline Estimator fit_estimator(std::span<const ParamValue> values, const ParamDomain& domain,
                               const DensityOptions& options = {}) {
  if (values.empty()) return uniform_estimator(domain);
  if (domain.kind() == ParamKind::categorical) {
    std::vector<std::string> labels;
    labels.reserve(values.size());
    for (const auto& v : values) labels.push_back(std::get<std::string>(v));
    return fit_categorical(labels, domain);
  }
  std::vector<double> raw;
  raw.reserve(values.size());
  for (const auto& v : values) raw.push_back(numeric_value(v));
  NumericKde kde = NumericKde::fit(raw, domain, options.adaptive_floor);
  if (options.prior_weight > 0.0) {
    return PriorMixedKde(std::move(kde), std::get<UniformDensity>(uniform_estimator(domain)), options.prior_weight);
  }
  return kde;
}

/// Density of a domain value under an estimator.
inline double density_at(const Estimator& est, const ParamValue& value) {
  return std::visit(
      [&](const auto& e) -> double {
        using E = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<E, CategoricalPmf>) {
          return e.weight(std::get<std::string>(value));
        } else {
          return e.estimate(numeric_value(value));
        }
      },
      est);
}

inline double log_density_at(const Estimator& est, const ParamValue& value) {
  return std::visit(
      [&](const auto& e) -> double {
        using E = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<E, CategoricalPmf>) {
          return std::log(e.weight(std::get<std::string>(value)));
        } else if constexpr (std::is_same_v<E, NumericKde> || std::is_same_v<E, PriorMixedKde>) {
          return e.log_estimate(numeric_value(value));
        } else {
          return std::log(e.estimate(numeric_value(value)));
        }
      },
      est);
}

/// Draws a domain value from an estimator (integers are rounded).
template <class Rng>
ParamValue sample_from(const Estimator& est, const ParamDomain& domain, Rng& rng) {
  return std::visit(
      [&](const auto& e) -> ParamValue {
        using E = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<E, CategoricalPmf>) {
          return e.sample(rng);
        } else if constexpr (std::is_same_v<E, NumericKde> || std::is_same_v<E, PriorMixedKde>) {
          return domain.value_from_search_scale(e.sample_transformed(rng));
        } else {
          return domain.value_from_search_scale(domain.to_search_scale(e.sample(rng)));
        }
      },
      est);
}

/// Good and bad estimators for one parameter.
struct DensityPair {
  Estimator good;
  Estimator bad;

  double good_density(const ParamValue& v) const { return density_at(good, v); }
  double bad_density(const ParamValue& v) const { return density_at(bad, v); }
};

}  // namespace gsos
