#pragma once

// Run configuration for the command-line tool and a validator for the subset
// of JSON Schema used by the published schemas in docs/.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "sutured/errors.hpp"
#include "sutured/homology.hpp"
#include "sutured/model.hpp"
#include "sutured/schemas.hpp"  // generated at configure time from docs/*.schema.json

namespace sutured {

namespace schema {

inline bool has_type(const nlohmann::json& v, const std::string& type) {
  if (type == "object") return v.is_object();
  if (type == "array") return v.is_array();
  if (type == "string") return v.is_string();
  if (type == "boolean") return v.is_boolean();
  if (type == "null") return v.is_null();
  if (type == "number") return v.is_number();
  if (type == "integer") {
    if (v.is_number_integer()) return true;
    return v.is_number_float() && std::isfinite(v.get<double>()) && std::floor(v.get<double>()) == v.get<double>();
  }
  return false;
}

/// Supports type (string or list), enum, const, minimum, maximum,
/// exclusiveMinimum, exclusiveMaximum, properties, required,
/// additionalProperties (boolean or schema), items, minItems, maxItems,
/// oneOf/anyOf. Errors are reported as "<json pointer>: message".
inline void validate(const nlohmann::json& v, const nlohmann::json& s, const std::string& path,
                     std::vector<std::string>& errors) {
  const std::string where = path.empty() ? "/" : path;
  if (s.contains("type")) {
    bool ok = false;
    if (s["type"].is_array()) {
      for (const auto& t : s["type"]) ok = ok || has_type(v, t.get<std::string>());
    } else {
      ok = has_type(v, s["type"].get<std::string>());
    }
    if (!ok) {
      errors.push_back(where + ": expected type " + s["type"].dump() + ", got " + v.type_name());
      return;
    }
  }
  if (s.contains("enum")) {
    bool found = false;
    for (const auto& e : s["enum"]) found = found || e == v;
    if (!found) errors.push_back(where + ": " + v.dump() + " is not one of " + s["enum"].dump());
  }
  if (s.contains("const") && s["const"] != v) errors.push_back(where + ": expected " + s["const"].dump());
  if (v.is_number()) {
    const double x = v.get<double>();
    if (s.contains("minimum") && x < s["minimum"].get<double>())
      errors.push_back(where + ": " + v.dump() + " < minimum " + s["minimum"].dump());
    if (s.contains("maximum") && x > s["maximum"].get<double>())
      errors.push_back(where + ": " + v.dump() + " > maximum " + s["maximum"].dump());
    if (s.contains("exclusiveMinimum") && x <= s["exclusiveMinimum"].get<double>())
      errors.push_back(where + ": " + v.dump() + " must be > " + s["exclusiveMinimum"].dump());
    if (s.contains("exclusiveMaximum") && x >= s["exclusiveMaximum"].get<double>())
      errors.push_back(where + ": " + v.dump() + " must be < " + s["exclusiveMaximum"].dump());
  }
  if (v.is_object()) {
    const nlohmann::json props = s.value("properties", nlohmann::json::object());
    for (const auto& key : s.value("required", nlohmann::json::array()))
      if (!v.contains(key.get<std::string>())) errors.push_back(where + ": missing required key " + key.dump());
    for (const auto& [key, value] : v.items()) {
      const std::string child = path + "/" + key;
      if (props.contains(key)) {
        validate(value, props[key], child, errors);
      } else if (s.contains("additionalProperties")) {
        const auto& extra = s["additionalProperties"];
        if (extra.is_boolean()) {
          if (!extra.get<bool>()) errors.push_back(child + ": unknown key");
        } else {
          validate(value, extra, child, errors);
        }
      }
    }
  }
  if (v.is_array()) {
    if (s.contains("minItems") && v.size() < s["minItems"].get<std::size_t>())
      errors.push_back(where + ": fewer than " + s["minItems"].dump() + " items");
    if (s.contains("maxItems") && v.size() > s["maxItems"].get<std::size_t>())
      errors.push_back(where + ": more than " + s["maxItems"].dump() + " items");
    if (s.contains("items"))
      for (std::size_t i = 0; i < v.size(); ++i) validate(v[i], s["items"], path + "/" + std::to_string(i), errors);
  }
  for (const char* combinator : {"oneOf", "anyOf"}) {
    if (!s.contains(combinator)) continue;
    int matches = 0;
    for (const auto& alt : s[combinator]) {
      std::vector<std::string> sub;
      validate(v, alt, path, sub);
      matches += sub.empty();
    }
    const bool ok = std::string(combinator) == "oneOf" ? matches == 1 : matches >= 1;
    if (!ok) errors.push_back(where + ": does not match " + combinator);
  }
}

inline std::vector<std::string> errors(const nlohmann::json& v, const nlohmann::json& s) {
  std::vector<std::string> out;
  validate(v, s, "", out);
  return out;
}

/// Raises ConfigError listing every violation.
inline void require_valid(const nlohmann::json& v, const nlohmann::json& s, const std::string& what) {
  const auto errs = errors(v, s);
  if (errs.empty()) return;
  std::string msg = what + " failed schema validation:";
  for (const auto& e : errs) msg += "\n  " + e;
  throw Error(ErrorCode::ConfigError, msg);
}

inline const nlohmann::json& config_schema() {
  static const nlohmann::json s = nlohmann::json::parse(embedded::config_schema);
  return s;
}

inline const nlohmann::json& output_schema() {
  static const nlohmann::json s = nlohmann::json::parse(embedded::output_schema);
  return s;
}

}  // namespace schema

struct SampleSizes {
  int per_chart = 1000;     // beta(X_H) = H points per chart
  int trajectories = 100;   // energy / area drift
  int outer = 100;          // f on outer samples certified in S
  int pullback = 200;       // phi^* beta = beta samples
  int df = 24;              // phi^* beta - beta = df samples
  int grid_nx = 50, grid_ny = 50, grid_nt = 20;
};

struct RunConfig {
  ModelParams model;
  std::string command;
  Theory theory = Theory::ECH;
  std::optional<int> h_max;  // default: n-1 for ech, 20 otherwise
  int s_max = 3;
  std::string suite = "all";
  std::string what = "levelsets";
  std::string format = "json";
  std::string out;
  double eps_chi = 0.1;
  std::uint64_t seed = 1;
  SampleSizes samples;

  int effective_h_max() const { return h_max.value_or(theory == Theory::ECH ? model.n - 1 : 20); }
};

inline void to_json(nlohmann::json& j, const SampleSizes& s) {
  j = {{"per_chart", s.per_chart}, {"trajectories", s.trajectories}, {"outer", s.outer},
       {"pullback", s.pullback}, {"df", s.df}, {"grid", {s.grid_nx, s.grid_ny, s.grid_nt}}};
}

inline void from_json(const nlohmann::json& j, SampleSizes& s) {
  auto get = [&](const char* key, int& field) {
    if (j.contains(key)) j.at(key).get_to(field);
  };
  get("per_chart", s.per_chart);
  get("trajectories", s.trajectories);
  get("outer", s.outer);
  get("pullback", s.pullback);
  get("df", s.df);
  if (j.contains("grid")) {
    const auto& g = j.at("grid");
    s.grid_nx = g.at(0).get<int>();
    s.grid_ny = g.at(1).get<int>();
    s.grid_nt = g.at(2).get<int>();
  }
}

inline void to_json(nlohmann::json& j, const RunConfig& c) {
  j = {{"model", c.model},   {"theory", to_string(c.theory)}, {"s_max", c.s_max},
       {"suite", c.suite},   {"what", c.what},                {"format", c.format},
       {"eps_chi", c.eps_chi}, {"seed", c.seed},             {"samples", c.samples}};
  if (!c.command.empty()) j["command"] = c.command;
  if (c.h_max) j["h_max"] = *c.h_max;
  if (!c.out.empty()) j["out"] = c.out;
}

/// Validates `j` against the config schema, then reads it. Missing keys keep
/// their defaults.
inline RunConfig run_config_from_json(const nlohmann::json& j) {
  schema::require_valid(j, schema::config_schema(), "config");
  RunConfig c;
  if (j.contains("model")) j.at("model").get_to(c.model);
  if (j.contains("command")) c.command = j.at("command").get<std::string>();
  if (j.contains("theory")) c.theory = theory_from_string(j.at("theory").get<std::string>());
  if (j.contains("h_max")) c.h_max = j.at("h_max").get<int>();
  if (j.contains("s_max")) c.s_max = j.at("s_max").get<int>();
  if (j.contains("suite")) c.suite = j.at("suite").get<std::string>();
  if (j.contains("what")) c.what = j.at("what").get<std::string>();
  if (j.contains("format")) c.format = j.at("format").get<std::string>();
  if (j.contains("out")) c.out = j.at("out").get<std::string>();
  if (j.contains("eps_chi")) c.eps_chi = j.at("eps_chi").get<double>();
  if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("samples")) j.at("samples").get_to(c.samples);
  return c;
}

}  // namespace sutured
