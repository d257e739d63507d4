#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include <json.hpp>

#include <mgflow/csv.hpp>
#include <mgflow/problem_json.hpp>
#include <mgflow/problems.hpp>

using namespace mgflow;

TEST_CASE("every builtin problem loads and constructs a simulation") {
  const std::vector<std::string> names = list_problems();
  REQUIRE(names.size() == 8);
  for (const std::string& name : names) {
    INFO(name);
    const ProblemSetup p = builtin_problem(name);
    CHECK(p.name == name);
    CHECK(p.config.t_end > 0.0);
    CHECK_NOTHROW(make_simulation(p));
  }
  CHECK_THROWS_AS(builtin_problem("sodd"), ConfigError);
}

TEST_CASE("benchmark parameters") {
  const ProblemSetup sod = builtin_problem("sod");
  CHECK(sod.minus.rho == 1.0);
  CHECK(sod.minus.p == 1.0);
  CHECK(sod.plus.rho == 0.125);
  CHECK(sod.plus.p == 0.1);
  CHECK(sod.config.t_end == 0.2);
  CHECK(std::string(sod.eos_minus.kind()) == "ideal");

  const ProblemSetup blast = builtin_problem("air_blast");
  CHECK(blast.config.geometry == Geometry::spherical);
  CHECK(blast.config.interface_x == 0.3);
  CHECK(blast.minus.rho == 618.935);
  CHECK(blast.minus.p == 6.314e12);
  CHECK(blast.config.cells == 4000);
  CHECK(blast.config.gauges.size() == 5);

  const ProblemSetup ud = builtin_problem("udex");
  CHECK(std::string(ud.eos_minus.kind()) == "jwl");
  CHECK(std::string(ud.eos_plus.kind()) == "polynomial");
  CHECK(ud.minus.rho == 1630.0);
  CHECK(ud.config.bc_lo == BoundaryType::reflective);

  // Identical initial data, different water models.
  const ProblemSetup sg = builtin_problem("gas_water_sg");
  const ProblemSetup poly = builtin_problem("gas_water_poly");
  CHECK(sg.minus.p == poly.minus.p);
  CHECK(sg.plus.rho == poly.plus.rho);
  CHECK(std::string(sg.eos_plus.kind()) == "stiffened");
  CHECK(std::string(poly.eos_plus.kind()) == "polynomial");
}

TEST_CASE("problem descriptions survive a JSON round trip") {
  for (const std::string& name : list_problems()) {
    INFO(name);
    const ProblemSetup p = builtin_problem(name);
    const ProblemSetup q = problem_from_json(problem_to_json(p));
    CHECK(q.name == p.name);
    CHECK(q.minus.rho == p.minus.rho);
    CHECK(q.minus.u == p.minus.u);
    CHECK(q.minus.p == p.minus.p);
    CHECK(q.plus.rho == p.plus.rho);
    CHECK(q.plus.p == p.plus.p);
    CHECK(std::string(q.eos_minus.kind()) == p.eos_minus.kind());
    CHECK(std::string(q.eos_plus.kind()) == p.eos_plus.kind());
    CHECK(q.config.geometry == p.config.geometry);
    CHECK(q.config.cells == p.config.cells);
    CHECK(q.config.x_lo == p.config.x_lo);
    CHECK(q.config.x_hi == p.config.x_hi);
    CHECK(q.config.interface_x == p.config.interface_x);
    CHECK(q.config.cfl == p.config.cfl);
    CHECK(q.config.t_end == p.config.t_end);
    CHECK(q.config.p_ambient == p.config.p_ambient);
    CHECK(q.config.bc_lo == p.config.bc_lo);
    CHECK(q.config.bc_hi == p.config.bc_hi);
    CHECK(q.config.gauges == p.config.gauges);
    const DensityInterval dp = validity_domain(p.eos_plus);
    const DensityInterval dq = validity_domain(q.eos_plus);
    CHECK(dq.lo == dp.lo);
    CHECK(dq.hi == dp.hi);
  }
}

TEST_CASE("malformed problem JSON is rejected") {
  using nlohmann::ordered_json;
  CHECK_THROWS_AS(problem_from_json(ordered_json::array()), ConfigError);
  ordered_json j = problem_to_json(builtin_problem("sod"));
  j.erase("minus");
  CHECK_THROWS_AS(problem_from_json(j), ConfigError);
  j = problem_to_json(builtin_problem("sod"));
  j["minus"]["eos"]["type"] = "mystery";
  CHECK_THROWS_AS(problem_from_json(j), ConfigError);
  j = problem_to_json(builtin_problem("sod"));
  j["bc_lo"] = "periodic";
  CHECK_THROWS_AS(problem_from_json(j), ConfigError);
}

TEST_CASE("fixed-width numeric formatting round-trips doubles") {
  const double values[] = {0.1, 1.0 / 3.0, 6.314e12, -2.36665e9,
                           1.75215573203018};
  for (double v : values) {
    const std::string s = format_full(v);
    CHECK(std::stod(s) == v);
  }
  CHECK(format_full(1.0) == "1.0000000000000000e+00");
}
