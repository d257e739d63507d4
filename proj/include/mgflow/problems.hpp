#pragma once

#include <string>
#include <vector>

#include "eos.hpp"
#include "errors.hpp"
#include "flow1d.hpp"
#include "riemann.hpp"

namespace mgflow {

// A complete two-medium setup: EOS and constant initial state on each side
// of the interface, plus the grid/time configuration.
struct ProblemSetup {
  std::string name;
  EosModel eos_minus;
  EosModel eos_plus;
  FluidState minus;
  FluidState plus;
  Simulation1DConfig config;
};

inline TwoMediumSim make_simulation(const ProblemSetup& p) {
  return TwoMediumSim(p.eos_minus, p.minus, p.eos_plus, p.plus, p.config);
}

namespace detail {

inline Jwl jwl_tnt() { return {3.712e11, 3.23e9, 0.30, 4.15, 0.95, 1630.0}; }

inline Polynomial poly_water() {
  return {2.2e9, 9.54e9, 1.45e10, 0.28, 0.28, 2.2e9, 0.0, 1000.0};
}

inline Simulation1DConfig planar_config(double t_end, double p_ambient) {
  Simulation1DConfig c;
  c.geometry = Geometry::planar;
  c.x_lo = 0.0;
  c.x_hi = 1.0;
  c.cells = 400;
  c.interface_x = 0.5;
  c.bc_lo = BoundaryType::outflow;
  c.bc_hi = BoundaryType::outflow;
  c.cfl = 0.5;
  c.t_end = t_end;
  c.p_ambient = p_ambient;
  return c;
}

}  // namespace detail

inline std::vector<std::string> list_problems() {
  return {"sod",           "shyue",          "saurel", "gas_water_sg",
          "gas_water_poly", "jwl_poly",      "air_blast", "udex"};
}

inline ProblemSetup builtin_problem(const std::string& name) {
  if (name == "sod") {
    return {name,
            EosModel(IdealGas{1.4}),
            EosModel(IdealGas{1.4}),
            {1.0, 0.0, 1.0},
            {0.125, 0.0, 0.1},
            detail::planar_config(0.2, 0.1)};
  }
  if (name == "shyue") {
    const Jwl gas{8.545e11, 2.05e10, 0.25, 4.6, 1.35, 1840.0};
    return {name,
            EosModel(gas),
            EosModel(gas),
            {1700.0, 0.0, 1e12},
            {1000.0, 0.0, 5e10},
            detail::planar_config(1.2e-5, 5e10)};
  }
  if (name == "saurel") {
    const CochranChan explosive{8.192e8, 1.508e9, 1.19, 4.53, 1.42, 1134.0};
    return {name,
            EosModel(explosive),
            EosModel(explosive),
            {1134.0, 1000.0, 2e10},
            {500.0, 1000.0, 2e10},
            detail::planar_config(4.0e-5, 2e10)};
  }
  if (name == "gas_water_sg") {
    return {name,
            EosModel(IdealGas{2.0}),
            EosModel(StiffenedGas{7.15, 3.31e8}),
            {1630.0, 0.0, 7e9},
            {1000.0, 0.0, 1e5},
            detail::planar_config(8.0e-5, 1e5)};
  }
  if (name == "gas_water_poly") {
    return {name,
            EosModel(IdealGas{2.0}),
            EosModel(detail::poly_water()),
            {1630.0, 0.0, 7e9},
            {1000.0, 0.0, 1e5},
            detail::planar_config(8.0e-5, 1e5)};
  }
  if (name == "jwl_poly") {
    return {name,
            EosModel(detail::jwl_tnt()),
            EosModel(detail::poly_water()),
            {1630.0, 0.0, 8.3e9},
            {1000.0, 0.0, 1e5},
            detail::planar_config(8.0e-5, 1e5)};
  }
  if (name == "air_blast") {
    Simulation1DConfig c;
    c.geometry = Geometry::spherical;
    c.x_lo = 0.0;
    c.x_hi = 5000.0;
    c.cells = 4000;
    c.interface_x = 0.3;
    c.bc_lo = BoundaryType::reflective;
    c.bc_hi = BoundaryType::outflow;
    c.cfl = 0.5;
    c.t_end = 0.7;
    c.p_ambient = 1.013e5;
    c.gauges = {50.0, 100.0, 150.0, 200.0, 250.0};
    return {name,
            EosModel(IdealGas{1.2}),
            EosModel(IdealGas{1.4}),
            {618.935, 0.0, 6.314e12},
            {1.29, 0.0, 1.013e5},
            c};
  }
  if (name == "udex") {
    Simulation1DConfig c;
    c.geometry = Geometry::spherical;
    c.x_lo = 0.0;
    c.x_hi = 15.0;
    c.cells = 4000;
    c.interface_x = 0.245;
    c.bc_lo = BoundaryType::reflective;
    c.bc_hi = BoundaryType::outflow;
    c.cfl = 0.5;
    c.t_end = 8.0e-3;
    c.p_ambient = 1e5;
    c.gauges = {3.0, 5.0, 7.0, 9.0, 11.0};
    return {name,
            EosModel(detail::jwl_tnt()),
            EosModel(detail::poly_water()),
            {1630.0, 0.0, 9.5e9},
            {1000.0, 0.0, 1e5},
            c};
  }
  throw ConfigError("unknown builtin problem '" + name + "'");
}

}  // namespace mgflow
