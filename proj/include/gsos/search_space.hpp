#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace gsos {

enum class ParamKind { continuous, log_continuous, integer, categorical };

inline const char* to_string(ParamKind kind) {
  switch (kind) {
    case ParamKind::continuous: return "continuous";
    case ParamKind::log_continuous: return "log_continuous";
    case ParamKind::integer: return "integer";
    case ParamKind::categorical: return "categorical";
  }
  return "unknown";
}

inline ParamKind parse_param_kind(const std::string& text) {
  if (text == "continuous") return ParamKind::continuous;
  if (text == "log_continuous") return ParamKind::log_continuous;
  if (text == "integer") return ParamKind::integer;
  if (text == "categorical") return ParamKind::categorical;
  throw std::invalid_argument("unknown parameter kind '" + text + "'");
}

/// Value of a single hyperparameter. Continuous kinds hold a double, integer
/// kinds an int64 and categorical kinds the choice label.
using ParamValue = std::variant<double, std::int64_t, std::string>;

inline std::string format_value(const ParamValue& value) {
  if (const auto* s = std::get_if<std::string>(&value)) return *s;
  if (const auto* i = std::get_if<std::int64_t>(&value)) return std::to_string(*i);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", std::get<double>(value));
  return buf;
}

/// Numeric view of a value. Categorical labels such as "128" parse as numbers.
inline double numeric_value(const ParamValue& value) {
  if (const auto* d = std::get_if<double>(&value)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(&value)) return static_cast<double>(*i);
  const auto& label = std::get<std::string>(value);
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(label, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != label.size() || label.empty()) {
    throw std::invalid_argument("categorical value '" + label + "' is not numeric");
  }
  return out;
}

/// Domain of one hyperparameter together with its default value.
class ParamDomain {
 public:
  static ParamDomain continuous(std::string name, double low, double high, double default_value) {
    return ParamDomain(std::move(name), ParamKind::continuous, low, high, {}, default_value);
  }

  static ParamDomain log_continuous(std::string name, double low, double high, double default_value) {
    return ParamDomain(std::move(name), ParamKind::log_continuous, low, high, {}, default_value);
  }

  static ParamDomain integer(std::string name, std::int64_t low, std::int64_t high,
                             std::int64_t default_value) {
    return ParamDomain(std::move(name), ParamKind::integer, static_cast<double>(low),
                       static_cast<double>(high), {}, default_value);
  }

  static ParamDomain categorical(std::string name, std::vector<std::string> choices,
                                 std::string default_value) {
    return ParamDomain(std::move(name), ParamKind::categorical, 0.0, 0.0, std::move(choices),
                       std::move(default_value));
  }

  const std::string& name() const noexcept { return name_; }
  ParamKind kind() const noexcept { return kind_; }
  double low() const noexcept { return low_; }
  double high() const noexcept { return high_; }
  const std::vector<std::string>& choices() const noexcept { return choices_; }
  const ParamValue& default_value() const noexcept { return default_; }
  bool is_numeric() const noexcept { return kind_ != ParamKind::categorical; }

  bool contains(const ParamValue& value) const {
    switch (kind_) {
      case ParamKind::continuous:
      case ParamKind::log_continuous: {
        const auto* d = std::get_if<double>(&value);
        return d != nullptr && std::isfinite(*d) && *d >= low_ && *d <= high_;
      }
      case ParamKind::integer: {
        const auto* i = std::get_if<std::int64_t>(&value);
        return i != nullptr && static_cast<double>(*i) >= low_ && static_cast<double>(*i) <= high_;
      }
      case ParamKind::categorical: {
        const auto* s = std::get_if<std::string>(&value);
        return s != nullptr && choice_index(*s).has_value();
      }
    }
    return false;
  }

  std::optional<std::size_t> choice_index(const std::string& label) const {
    for (std::size_t i = 0; i < choices_.size(); ++i) {
      if (choices_[i] == label) return i;
    }
    return std::nullopt;
  }

  // Numeric domains are modelled in a "search scale": log10 for
  // log_continuous, identity otherwise. Densities and sampling live there.
  double to_search_scale(double x) const { return kind_ == ParamKind::log_continuous ? std::log10(x) : x; }
  double from_search_scale(double u) const {
    return kind_ == ParamKind::log_continuous ? std::pow(10.0, u) : u;
  }
  double search_low() const { return to_search_scale(low_); }
  double search_high() const { return to_search_scale(high_); }
  double search_width() const { return search_high() - search_low(); }

  /// Maps a search-scale coordinate back to a domain value (rounding and
  /// clamping integers).
  ParamValue value_from_search_scale(double u) const {
    if (kind_ == ParamKind::integer) {
      double r = std::round(u);
      r = std::min(std::max(r, low_), high_);
      return static_cast<std::int64_t>(r);
    }
    double x = from_search_scale(u);
    return std::min(std::max(x, low_), high_);
  }

  friend bool operator==(const ParamDomain&, const ParamDomain&) = default;

 private:
  ParamDomain(std::string name, ParamKind kind, double low, double high,
              std::vector<std::string> choices, ParamValue default_value)
      : name_(std::move(name)),
        kind_(kind),
        low_(low),
        high_(high),
        choices_(std::move(choices)),
        default_(std::move(default_value)) {
    check();
  }

  void check() const {
    auto fail = [this](const std::string& why) {
      throw std::invalid_argument("invalid domain for '" + name_ + "': " + why);
    };
    if (name_.empty()) throw std::invalid_argument("parameter name must not be empty");
    switch (kind_) {
      case ParamKind::continuous:
      case ParamKind::log_continuous:
        if (!std::isfinite(low_) || !std::isfinite(high_)) fail("bounds must be finite");
        if (!(low_ < high_)) fail("low must be < high");
        if (kind_ == ParamKind::log_continuous && !(low_ > 0.0)) fail("log domain requires low > 0");
        break;
      case ParamKind::integer:
        if (low_ > high_) fail("low must be <= high");
        break;
      case ParamKind::categorical:
        if (choices_.empty()) fail("choices must not be empty");
        for (std::size_t i = 0; i < choices_.size(); ++i) {
          for (std::size_t j = i + 1; j < choices_.size(); ++j) {
            if (choices_[i] == choices_[j]) fail("duplicate choice '" + choices_[i] + "'");
          }
        }
        break;
    }
    if (!contains(default_)) fail("default " + format_value(default_) + " outside domain");
  }

  std::string name_;
  ParamKind kind_;
  double low_;
  double high_;
  std::vector<std::string> choices_;
  ParamValue default_;
};

/// One value per parameter, keyed by name.
class Configuration {
 public:
  using Map = std::map<std::string, ParamValue>;

  Configuration() = default;
  explicit Configuration(Map values) : values_(std::move(values)) {}

  const ParamValue& at(const std::string& name) const {
    auto it = values_.find(name);
    if (it == values_.end()) throw std::out_of_range("configuration has no parameter '" + name + "'");
    return it->second;
  }
  bool contains(const std::string& name) const { return values_.count(name) != 0; }
  double numeric(const std::string& name) const { return numeric_value(at(name)); }
  const std::string& label(const std::string& name) const { return std::get<std::string>(at(name)); }

  void set(const std::string& name, ParamValue value) { values_[name] = std::move(value); }
  void erase(const std::string& name) { values_.erase(name); }

  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }
  const Map& values() const noexcept { return values_; }
  auto begin() const { return values_.begin(); }
  auto end() const { return values_.end(); }

  friend bool operator==(const Configuration&, const Configuration&) = default;

 private:
  Map values_;
};

/// Ordered, uniquely-named collection of parameter domains. Declaration order
/// is the canonical parameter order.
class SearchSpace {
 public:
  SearchSpace() = default;
  explicit SearchSpace(std::vector<ParamDomain> params) : params_(std::move(params)) {
    for (std::size_t i = 0; i < params_.size(); ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        if (params_[i].name() == params_[j].name()) {
          throw std::invalid_argument("duplicate parameter name '" + params_[i].name() + "'");
        }
      }
    }
  }

  const std::vector<ParamDomain>& params() const noexcept { return params_; }
  std::size_t size() const noexcept { return params_.size(); }
  bool empty() const noexcept { return params_.empty(); }
  auto begin() const { return params_.begin(); }
  auto end() const { return params_.end(); }

  const ParamDomain* find(const std::string& name) const {
    for (const auto& p : params_) {
      if (p.name() == name) return &p;
    }
    return nullptr;
  }
  const ParamDomain& at(const std::string& name) const {
    if (const auto* p = find(name)) return *p;
    throw std::out_of_range("search space has no parameter '" + name + "'");
  }

  std::vector<std::string> names() const {
    std::vector<std::string> out;
    out.reserve(params_.size());
    for (const auto& p : params_) out.push_back(p.name());
    return out;
  }

  /// Sub-space over the given names, kept in canonical order.
  template <class NameSet>
  SearchSpace subspace(const NameSet& names) const {
    std::vector<ParamDomain> sub;
    for (const auto& p : params_) {
      for (const auto& n : names) {
        if (n == p.name()) {
          sub.push_back(p);
          break;
        }
      }
    }
    if (sub.size() != std::size(names)) {
      throw std::invalid_argument("subspace requested with names outside the search space");
    }
    return SearchSpace(std::move(sub));
  }

  friend bool operator==(const SearchSpace&, const SearchSpace&) = default;

 private:
  std::vector<ParamDomain> params_;
};

/// The 10-parameter CNN search space with its default values.
inline SearchSpace paper_search_space() {
  return SearchSpace({
      ParamDomain::integer("num_conv_layers", 2, 4, 3),
      ParamDomain::log_continuous("lr", 1e-5, 1.0, 0.01),
      ParamDomain::continuous("dropout_rate", 0.0, 0.9, 0.0),
      ParamDomain::categorical("optimizer", {"adam", "sgd"}, "adam"),
      ParamDomain::integer("epoch", 10, 100, 10),
      ParamDomain::integer("stride", 1, 2, 1),
      ParamDomain::categorical("padding", {"valid", "same"}, "same"),
      ParamDomain::categorical("kernel", {"3", "5"}, "3"),
      ParamDomain::integer("num_fc_units", 64, 256, 64),
      ParamDomain::categorical("batch_size", {"32", "64", "128", "256"}, "32"),
  });
}

/// Draws a value uniformly over the domain (log-uniformly for log domains).
template <class Rng>
ParamValue sample_prior(const ParamDomain& domain, Rng& rng) {
  switch (domain.kind()) {
    case ParamKind::continuous:
      return std::uniform_real_distribution<double>(domain.low(), domain.high())(rng);
    case ParamKind::log_continuous: {
      double u = std::uniform_real_distribution<double>(domain.search_low(), domain.search_high())(rng);
      return std::min(std::max(std::pow(10.0, u), domain.low()), domain.high());
    }
    case ParamKind::integer:
      return std::uniform_int_distribution<std::int64_t>(static_cast<std::int64_t>(domain.low()),
                                                          static_cast<std::int64_t>(domain.high()))(rng);
    case ParamKind::categorical: {
      std::uniform_int_distribution<std::size_t> pick(0, domain.choices().size() - 1);
      return domain.choices()[pick(rng)];
    }
  }
  throw std::logic_error("unreachable parameter kind");
}

template <class Rng>
Configuration sample_prior(const SearchSpace& space, Rng& rng) {
  Configuration config;
  for (const auto& p : space) config.set(p.name(), sample_prior(p, rng));
  return config;
}

inline Configuration default_config(const SearchSpace& space) {
  Configuration config;
  for (const auto& p : space) config.set(p.name(), p.default_value());
  return config;
}

struct ValidationIssue {
  enum class Kind { missing, extra, out_of_domain };
  Kind kind;
  std::string parameter;
  std::string message;
};

struct ValidationResult {
  std::vector<ValidationIssue> issues;

  bool ok() const noexcept { return issues.empty(); }
  explicit operator bool() const noexcept { return ok(); }

  bool flags(const std::string& parameter) const {
    for (const auto& i : issues) {
      if (i.parameter == parameter) return true;
    }
    return false;
  }

  std::string describe() const {
    std::string out;
    for (const auto& i : issues) {
      if (!out.empty()) out += "; ";
      out += i.message;
    }
    return out;
  }
};

inline ValidationResult validate(const Configuration& config, const SearchSpace& space) {
  ValidationResult result;
  for (const auto& p : space) {
    if (!config.contains(p.name())) {
      result.issues.push_back({ValidationIssue::Kind::missing, p.name(), "missing parameter '" + p.name() + "'"});
    } else if (!p.contains(config.at(p.name()))) {
      result.issues.push_back({ValidationIssue::Kind::out_of_domain, p.name(),
                               "value " + format_value(config.at(p.name())) + " of '" + p.name() +
                                   "' is outside its domain"});
    }
  }
  for (const auto& [name, value] : config) {
    if (space.find(name) == nullptr) {
      result.issues.push_back({ValidationIssue::Kind::extra, name, "unknown parameter '" + name + "'"});
    }
  }
  return result;
}

}  // namespace gsos
