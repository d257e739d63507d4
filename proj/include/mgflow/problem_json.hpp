#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "eos.hpp"
#include "errors.hpp"
#include "flow1d.hpp"
#include "problems.hpp"

namespace mgflow {

namespace detail {

using json = nlohmann::ordered_json;

inline double num_field(const json& j, const std::string& key) {
  if (!j.contains(key))
    throw ConfigError("missing numeric field '" + key + "'");
  if (!j[key].is_number())
    throw ConfigError("field '" + key + "' must be a number");
  return j[key].get<double>();
}

inline double num_field_or(const json& j, const std::string& key,
                           double fallback) {
  return j.contains(key) ? num_field(j, key) : fallback;
}

inline EosModel eos_from_json(const json& j) {
  if (!j.is_object() || !j.contains("type"))
    throw ConfigError("EOS description needs a 'type' field");
  const std::string type = j["type"].get<std::string>();
  try {
    if (type == "ideal") return EosModel(IdealGas{num_field(j, "gamma")});
    if (type == "stiffened")
      return EosModel(
          StiffenedGas{num_field(j, "gamma"), num_field(j, "p_inf")});
    if (type == "polynomial")
      return EosModel(Polynomial{num_field(j, "a1"), num_field(j, "a2"),
                                 num_field(j, "a3"), num_field(j, "b0"),
                                 num_field(j, "b1"), num_field(j, "t1"),
                                 num_field(j, "t2"), num_field(j, "rho0")});
    if (type == "jwl")
      return EosModel(Jwl{num_field(j, "a1"), num_field(j, "a2"),
                          num_field(j, "omega"), num_field(j, "r1"),
                          num_field(j, "r2"), num_field(j, "rho0")});
    if (type == "cochran-chan")
      return EosModel(CochranChan{num_field(j, "a1"), num_field(j, "a2"),
                                  num_field(j, "omega"), num_field(j, "r1"),
                                  num_field(j, "r2"), num_field(j, "rho0")});
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("in '") + type + "' EOS: " + e.what());
  }
  throw ConfigError("unknown EOS type '" + type + "'");
}

inline json eos_to_json(const EosModel& eos) {
  json j;
  j["type"] = eos.kind();
  if (const IdealGas* m = eos.get_if<IdealGas>()) {
    j["gamma"] = m->gamma;
  } else if (const StiffenedGas* m = eos.get_if<StiffenedGas>()) {
    j["gamma"] = m->gamma;
    j["p_inf"] = m->p_inf;
  } else if (const Polynomial* m = eos.get_if<Polynomial>()) {
    j["a1"] = m->a1;
    j["a2"] = m->a2;
    j["a3"] = m->a3;
    j["b0"] = m->b0;
    j["b1"] = m->b1;
    j["t1"] = m->t1;
    j["t2"] = m->t2;
    j["rho0"] = m->rho0;
  } else if (const Jwl* m = eos.get_if<Jwl>()) {
    j["a1"] = m->a1;
    j["a2"] = m->a2;
    j["omega"] = m->omega;
    j["r1"] = m->r1;
    j["r2"] = m->r2;
    j["rho0"] = m->rho0;
  } else if (const CochranChan* m = eos.get_if<CochranChan>()) {
    j["a1"] = m->a1;
    j["a2"] = m->a2;
    j["omega"] = m->omega;
    j["r1"] = m->r1;
    j["r2"] = m->r2;
    j["rho0"] = m->rho0;
  }
  return j;
}

inline FluidState state_from_json(const json& j) {
  return {num_field(j, "rho"), num_field(j, "u"), num_field(j, "p")};
}

inline json state_to_json(const FluidState& s) {
  json j;
  j["rho"] = s.rho;
  j["u"] = s.u;
  j["p"] = s.p;
  return j;
}

inline BoundaryType bc_from_string(const std::string& s) {
  if (s == "outflow") return BoundaryType::outflow;
  if (s == "reflective") return BoundaryType::reflective;
  throw ConfigError("unknown boundary type '" + s +
                    "' (expected outflow or reflective)");
}

inline const char* bc_to_string(BoundaryType b) {
  return b == BoundaryType::reflective ? "reflective" : "outflow";
}

}  // namespace detail

inline ProblemSetup problem_from_json(const nlohmann::ordered_json& j) {
  using detail::num_field;
  using detail::num_field_or;
  if (!j.is_object()) throw ConfigError("problem description must be an object");
  if (!j.contains("minus") || !j.contains("plus"))
    throw ConfigError("problem needs 'minus' and 'plus' fluid sections");

  Simulation1DConfig c;
  const std::string geom = j.value("geometry", "planar");
  if (geom == "planar")
    c.geometry = Geometry::planar;
  else if (geom == "spherical")
    c.geometry = Geometry::spherical;
  else
    throw ConfigError("unknown geometry '" + geom + "'");

  if (j.contains("domain")) {
    if (!j["domain"].is_array() || j["domain"].size() != 2)
      throw ConfigError("'domain' must be [lo, hi]");
    c.x_lo = j["domain"][0].get<double>();
    c.x_hi = j["domain"][1].get<double>();
  }
  c.cells = static_cast<int>(num_field_or(j, "cells", 400));
  c.interface_x = num_field(j, "interface");
  c.cfl = num_field_or(j, "cfl", c.cfl);
  c.t_end = num_field(j, "t_end");
  c.p_ambient = num_field_or(j, "p_ambient", 0.0);
  c.small_cell_theta = num_field_or(j, "small_cell_theta", c.small_cell_theta);
  if (j.contains("bc_lo"))
    c.bc_lo = detail::bc_from_string(j["bc_lo"].get<std::string>());
  if (j.contains("bc_hi"))
    c.bc_hi = detail::bc_from_string(j["bc_hi"].get<std::string>());
  if (j.contains("gauges"))
    c.gauges = j["gauges"].get<std::vector<double>>();
  if (j.contains("snapshots"))
    c.snapshot_times = j["snapshots"].get<std::vector<double>>();

  const auto& jm = j["minus"];
  const auto& jp = j["plus"];
  if (!jm.contains("eos") || !jm.contains("state") || !jp.contains("eos") ||
      !jp.contains("state"))
    throw ConfigError("each fluid section needs 'eos' and 'state'");

  return {j.value("name", "custom"),
          detail::eos_from_json(jm["eos"]),
          detail::eos_from_json(jp["eos"]),
          detail::state_from_json(jm["state"]),
          detail::state_from_json(jp["state"]),
          c};
}

inline nlohmann::ordered_json problem_to_json(const ProblemSetup& p) {
  nlohmann::ordered_json j;
  j["name"] = p.name;
  j["geometry"] =
      p.config.geometry == Geometry::spherical ? "spherical" : "planar";
  j["domain"] = {p.config.x_lo, p.config.x_hi};
  j["interface"] = p.config.interface_x;
  j["cells"] = p.config.cells;
  j["cfl"] = p.config.cfl;
  j["t_end"] = p.config.t_end;
  j["p_ambient"] = p.config.p_ambient;
  j["small_cell_theta"] = p.config.small_cell_theta;
  j["bc_lo"] = detail::bc_to_string(p.config.bc_lo);
  j["bc_hi"] = detail::bc_to_string(p.config.bc_hi);
  if (!p.config.gauges.empty()) j["gauges"] = p.config.gauges;
  if (!p.config.snapshot_times.empty())
    j["snapshots"] = p.config.snapshot_times;
  j["minus"]["eos"] = detail::eos_to_json(p.eos_minus);
  j["minus"]["state"] = detail::state_to_json(p.minus);
  j["plus"]["eos"] = detail::eos_to_json(p.eos_plus);
  j["plus"]["state"] = detail::state_to_json(p.plus);
  return j;
}

}  // namespace mgflow
