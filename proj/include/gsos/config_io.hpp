#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "gsos/grouped_sequential.hpp"
#include "gsos/objectives.hpp"
#include "gsos/search_space.hpp"

// JSON readers and writers for search spaces, importance tables, group plans
// and surrogate definitions. All share one file layout: a top-level object
// whose keys ("parameters", "importance", "groups", "surrogate") are
// independent sections, so a single file may carry several of them.

namespace gsos {

using json = nlohmann::json;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("'" + path + "': " + e.what());
  }
}

namespace detail {

inline std::string choice_label(const json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<std::int64_t>());
  throw ConfigError("categorical choices must be strings or integers");
}

inline const json& require(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + ": missing '" + key + "'");
  return j.at(key);
}

}  // namespace detail

inline ParamDomain param_from_json(const json& j) {
  const std::string name = detail::require(j, "name", "parameter").get<std::string>();
  const std::string where = "parameter '" + name + "'";
  try {
    const ParamKind kind = parse_param_kind(detail::require(j, "kind", where).get<std::string>());
    const json& def = detail::require(j, "default", where);
    if (kind == ParamKind::categorical) {
      std::vector<std::string> choices;
      for (const auto& c : detail::require(j, "choices", where)) choices.push_back(detail::choice_label(c));
      return ParamDomain::categorical(name, std::move(choices), detail::choice_label(def));
    }
    const json& bounds = detail::require(j, "bounds", where);
    if (!bounds.is_array() || bounds.size() != 2) throw ConfigError(where + ": bounds must be [low, high]");
    switch (kind) {
      case ParamKind::continuous:
        return ParamDomain::continuous(name, bounds[0].get<double>(), bounds[1].get<double>(), def.get<double>());
      case ParamKind::log_continuous:
        return ParamDomain::log_continuous(name, bounds[0].get<double>(), bounds[1].get<double>(), def.get<double>());
      case ParamKind::integer:
        if (!bounds[0].is_number_integer() || !bounds[1].is_number_integer() || !def.is_number_integer()) {
          throw ConfigError(where + ": integer bounds and default must be whole numbers");
        }
        return ParamDomain::integer(name, bounds[0].get<std::int64_t>(), bounds[1].get<std::int64_t>(),
                                    def.get<std::int64_t>());
      default:
        break;
    }
  } catch (const json::exception& e) {
    throw ConfigError(where + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  throw ConfigError(where + ": unsupported kind");
}

inline json param_to_json(const ParamDomain& p) {
  json j;
  j["name"] = p.name();
  j["kind"] = to_string(p.kind());
  switch (p.kind()) {
    case ParamKind::categorical:
      j["choices"] = p.choices();
      j["default"] = std::get<std::string>(p.default_value());
      break;
    case ParamKind::integer:
      j["bounds"] = {static_cast<std::int64_t>(p.low()), static_cast<std::int64_t>(p.high())};
      j["default"] = std::get<std::int64_t>(p.default_value());
      break;
    default:
      j["bounds"] = {p.low(), p.high()};
      j["default"] = std::get<double>(p.default_value());
      break;
  }
  return j;
}

inline SearchSpace search_space_from_json(const json& j) {
  std::vector<ParamDomain> params;
  for (const auto& p : detail::require(j, "parameters", "search space")) params.push_back(param_from_json(p));
  try {
    return SearchSpace(std::move(params));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

inline json search_space_to_json(const SearchSpace& space) {
  json params = json::array();
  for (const auto& p : space) params.push_back(param_to_json(p));
  return json{{"parameters", params}};
}

inline SearchSpace load_search_space(const std::string& path) { return search_space_from_json(read_json_file(path)); }

inline ImportanceTable importance_from_json(const json& j) {
  std::map<std::string, double> weights;
  for (const auto& [name, w] : detail::require(j, "importance", "group file").items()) weights[name] = w.get<double>();
  try {
    return ImportanceTable(std::move(weights));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

inline ImportanceTable load_importance_table(const std::string& path) { return importance_from_json(read_json_file(path)); }

/// Builds a plan from the "groups" section: either explicit "members" lists
/// or "count" plus optional "cut_points" over the importance ranking.
inline GroupPlan group_plan_from_json(const json& j, const SearchSpace& space, std::size_t total_iters) {
  const ImportanceTable table = importance_from_json(j);
  const json& g = detail::require(j, "groups", "group file");
  std::vector<double> ratios = detail::require(g, "ratios", "groups").get<std::vector<double>>();
  try {
    if (g.contains("members")) {
      GroupPlan plan;
      plan.groups = g.at("members").get<std::vector<std::vector<std::string>>>();
      if (ratios.size() != plan.groups.size()) throw ConfigError("groups: one ratio per member list required");
      plan.budgets = split_budget(total_iters, ratios);
      plan.check(space);
      table.check_covers(space);
      plan.check_order(table);
      return plan;
    }
    const auto k = detail::require(g, "count", "groups").get<std::size_t>();
    std::optional<std::vector<std::size_t>> cuts;
    if (g.contains("cut_points")) cuts = g.at("cut_points").get<std::vector<std::size_t>>();
    return build_group_plan(table, space, k, total_iters, ratios, cuts);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("groups: ") + e.what());
  } catch (const json::exception& e) {
    throw ConfigError(std::string("groups: ") + e.what());
  }
}

inline GroupPlan load_group_plan(const std::string& path, const SearchSpace& space, std::size_t total_iters) {
  return group_plan_from_json(read_json_file(path), space, total_iters);
}

inline SurrogateCoefficients surrogate_from_json(const json& j) {
  const json& s = detail::require(j, "surrogate", "surrogate file");
  SurrogateCoefficients k;
  try {
    k.base_loss = s.at("base_loss").get<double>();
    k.conv_weight = s.at("conv_weight").get<double>();
    k.conv_rate = s.at("conv_rate").get<double>();
    k.lr_weight = s.at("lr_weight").get<double>();
    k.lr_log10_centre = s.at("lr_log10_centre").get<double>();
    k.lr_log10_half_width = s.at("lr_log10_half_width").get<double>();
    k.dropout_weight = s.at("dropout_weight").get<double>();
    k.dropout_centre = s.at("dropout_centre").get<double>();
    k.dropout_half_width = s.at("dropout_half_width").get<double>();
    k.epoch_weight = s.at("epoch_weight").get<double>();
    k.epoch_saturation = s.at("epoch_saturation").get<double>();
    k.stride_weight = s.at("stride_weight").get<double>();
    k.fc_weight = s.at("fc_weight").get<double>();
    k.fc_centre = s.at("fc_centre").get<double>();
    k.fc_half_width = s.at("fc_half_width").get<double>();
    k.optimizer_offset = s.at("optimizer_offset").get<std::map<std::string, double>>();
    k.padding_offset = s.at("padding_offset").get<std::map<std::string, double>>();
    k.kernel_offset = s.at("kernel_offset").get<std::map<std::string, double>>();
    k.batch_offset = s.at("batch_offset").get<std::map<std::string, double>>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("surrogate: ") + e.what());
  }
  return k;
}

inline CostModel cost_model_from_json(const json& j) {
  const json& c = detail::require(j, "cost_model", "surrogate file");
  CostModel m;
  try {
    m.base_seconds = c.at("base_seconds").get<double>();
    m.epoch_ref = c.at("epoch_ref").get<double>();
    m.conv_step = c.at("conv_step").get<double>();
    m.batch_ref = c.at("batch_ref").get<double>();
    m.batch_exponent = c.at("batch_exponent").get<double>();
    m.check();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("cost_model: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return m;
}

/// Reads the "minimizer" section as a configuration over `space`.
inline Configuration configuration_from_json(const json& j, const SearchSpace& space) {
  Configuration c;
  for (const auto& [name, v] : j.items()) {
    const ParamDomain* p = space.find(name);
    if (p == nullptr) throw ConfigError("configuration: unknown parameter '" + name + "'");
    switch (p->kind()) {
      case ParamKind::categorical: c.set(name, detail::choice_label(v)); break;
      case ParamKind::integer: c.set(name, v.get<std::int64_t>()); break;
      default: c.set(name, v.get<double>()); break;
    }
  }
  return c;
}

}  // namespace gsos
