#pragma once

#include <array>
#include <fstream>
#include <string>

#include "json.hpp"
#include "lightcone/errors.hpp"
#include "lightcone/report.hpp"
#include "lightcone/surface.hpp"

namespace lightcone {

namespace detail {

inline double require_number(const Json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path + ": expected number");
  return j.get<double>();
}

inline std::string require_string(const Json& j, const std::string& path) {
  if (!j.is_string()) throw ConfigError(path + ": expected string");
  return j.get<std::string>();
}

}  // namespace detail

/// Build a surface from a JSON definition document:
///   { "name": str, "base": catalog-name | "coords": [4 expressions],
///     "params": {name: number}, "sigma": expression,
///     "domain": {s_lo, s_hi, t_lo, t_hi, hard}, "claims_lightcone": bool }
/// Validation failures throw ConfigError with the offending field path.
inline Surface surface_from_definition(const Json& doc) {
  if (!doc.is_object()) throw ConfigError("$: expected object");
  for (const auto& [key, value] : doc.items()) {
    if (key != "name" && key != "base" && key != "coords" && key != "params" &&
        key != "sigma" && key != "domain" && key != "claims_lightcone")
      throw ConfigError("$." + key + ": unknown field");
  }
  if (!doc.contains("name")) throw ConfigError("$.name: required");
  const std::string name = detail::require_string(doc.at("name"), "$.name");

  ParamMap params;
  if (doc.contains("params")) {
    if (!doc.at("params").is_object()) throw ConfigError("$.params: expected object");
    for (const auto& [k, v] : doc.at("params").items())
      params[k] = detail::require_number(v, "$.params." + k);
  }

  const bool has_base = doc.contains("base");
  const bool has_coords = doc.contains("coords");
  if (has_base == has_coords)
    throw ConfigError("$: exactly one of 'base' and 'coords' is required");

  std::optional<RectDomain> domain;
  if (doc.contains("domain")) {
    const Json& d = doc.at("domain");
    if (!d.is_object()) throw ConfigError("$.domain: expected object");
    RectDomain r;
    if (d.contains("s_lo")) r.s_lo = detail::require_number(d.at("s_lo"), "$.domain.s_lo");
    if (d.contains("s_hi")) r.s_hi = detail::require_number(d.at("s_hi"), "$.domain.s_hi");
    if (d.contains("t_lo")) r.t_lo = detail::require_number(d.at("t_lo"), "$.domain.t_lo");
    if (d.contains("t_hi")) r.t_hi = detail::require_number(d.at("t_hi"), "$.domain.t_hi");
    if (d.contains("hard")) {
      if (!d.at("hard").is_boolean()) throw ConfigError("$.domain.hard: expected boolean");
      r.hard = d.at("hard").get<bool>();
    }
    if (r.s_lo >= r.s_hi) throw ConfigError("$.domain: empty s range");
    if (r.t_lo >= r.t_hi) throw ConfigError("$.domain: empty t range");
    domain = r;
  }

  if (has_base) {
    const std::string base = detail::require_string(doc.at("base"), "$.base");
    std::optional<ConformalFactor> sigma;
    if (doc.contains("sigma")) {
      try {
        sigma = parse_sigma(detail::require_string(doc.at("sigma"), "$.sigma"));
      } catch (const ParseError& e) {
        throw ConfigError("$.sigma: " + std::string(e.what()));
      }
    }
    Surface s = instantiate(base, params, std::move(sigma));
    s.name = name;
    if (domain) {
      if (s.domain != DomainKind::rectangle)
        throw ConfigError("$.domain: only rectangle-domain surfaces accept overrides");
      s.rect = *domain;
    }
    return s;
  }

  const Json& coords = doc.at("coords");
  if (!coords.is_array() || coords.size() != 4)
    throw ConfigError("$.coords: expected an array of 4 expressions");
  std::array<std::string, 4> exprs;
  for (int i = 0; i < 4; ++i)
    exprs[i] = detail::require_string(coords.at(i), "$.coords[" + std::to_string(i) + "]");
  bool claims = false;
  if (doc.contains("claims_lightcone")) {
    if (!doc.at("claims_lightcone").is_boolean())
      throw ConfigError("$.claims_lightcone: expected boolean");
    claims = doc.at("claims_lightcone").get<bool>();
  }
  try {
    return make_custom_surface(name, exprs, domain.value_or(RectDomain{}), params, claims);
  } catch (const ParseError& e) {
    throw ConfigError("$.coords: " + std::string(e.what()));
  }
}

inline Surface surface_from_definition_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open definition file '" + path + "'");
  Json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("definition file '" + path + "': " + e.what());
  }
  return surface_from_definition(doc);
}

}  // namespace lightcone
