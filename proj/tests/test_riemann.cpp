#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include <mgflow/problems.hpp>
#include <mgflow/riemann.hpp>

#include "oracles.hpp"

using namespace mgflow;

namespace {

const EosModel kAir{IdealGas{1.4}};
const FluidState kSodL{1.0, 0.0, 1.0};
const FluidState kSodR{0.125, 0.0, 0.1};

StarState solve_problem(const std::string& name, SolveOptions opt = {}) {
  const ProblemSetup p = builtin_problem(name);
  return solve_star(p.eos_minus, p.minus, p.eos_plus, p.plus, opt);
}

}  // namespace

TEST_CASE("hugoniot locus of an ideal gas has its closed form") {
  // rho behind a p = 2 shock from (1, 1): (p/pk + beta)/(beta p/pk + 1).
  const double beta = 0.4 / 2.4;
  const double rho_exact = (2.0 + beta) / (2.0 * beta + 1.0);
  CHECK(hugoniot_density(kAir, kSodL, 2.0, 1e-12) ==
        Catch::Approx(rho_exact).epsilon(1e-10));

  const RhoMaxResult rm = rho_max(kAir, kSodL);
  CHECK(rm.rho == Catch::Approx(6.0).epsilon(1e-10));  // (gamma+1)/(gamma-1)
  CHECK_FALSE(rm.beyond_validity);

  const BranchEval sh = shock_branch(kAir, kSodL, 2.0, 1e-12);
  CHECK(sh.f == Catch::Approx(oracle::ideal_f({1.0, 0.0, 1.0, 1.4}, 2.0))
                    .epsilon(1e-10));
  CHECK(sh.rho == Catch::Approx(rho_exact).epsilon(1e-10));

  CHECK_THROWS_AS(hugoniot_density(kAir, kSodL, 0.5), EosDomainError);
  CHECK_THROWS_AS(shock_branch(kAir, kSodL, 0.5), EosDomainError);
}

TEST_CASE("compression limit flags densities beyond the usable interval") {
  // Constant Gruneisen coefficient G: the limit is rho_k (1 + 2/G) exactly.
  const EosModel tnt{detail::jwl_tnt()};
  const FluidState k{1630.0, 0.0, 8.3e9};
  const RhoMaxResult rm = rho_max(tnt, k);
  CHECK(rm.rho == Catch::Approx(1630.0 * (1.0 + 2.0 / 0.30)).epsilon(1e-10));
  CHECK(rm.beyond_validity);  // limit sits above the guaranteed interval
}

TEST_CASE("rarefaction branch reproduces ideal-gas closed forms") {
  // Release from (1, 1) to p = 0.5: isentrope density and velocity change.
  const double rho_exact = std::pow(0.5, 1.0 / 1.4);
  const double f_exact = oracle::ideal_f({1.0, 0.0, 1.0, 1.4}, 0.5);

  const BranchEval one = rarefaction_branch(kAir, kSodL, 0.5, 1);
  CHECK(one.f == Catch::Approx(f_exact).epsilon(1e-3));

  const BranchEval fine = rarefaction_branch(kAir, kSodL, 0.5, 64);
  CHECK(fine.f == Catch::Approx(f_exact).epsilon(1e-9));
  CHECK(fine.rho == Catch::Approx(rho_exact).epsilon(1e-9));

  CHECK_THROWS_AS(rarefaction_branch(kAir, kSodL, 2.0), EosDomainError);
}

TEST_CASE("stiffened-gas isentrope release matches its closed form") {
  const EosModel water{StiffenedGas{7.15, 3.31e8}};
  const FluidState k{1000.0, 0.0, 1e5};
  // (p + p_inf) proportional to rho^gamma along the isentrope.
  const double rho_exact =
      1000.0 * std::pow((5e4 + 3.31e8) / (1e5 + 3.31e8), 1.0 / 7.15);
  const BranchEval ev = rarefaction_branch(water, k, 5e4, 256);
  CHECK(ev.rho == Catch::Approx(rho_exact).epsilon(1e-10));
  CHECK(rho_exact == Catch::Approx(999.978878099666).epsilon(1e-12));
}

TEST_CASE("acoustic first guess") {
  CHECK(acoustic_guess(kAir, kSodL, kAir, kSodR) ==
        Catch::Approx(0.190504363531636).epsilon(1e-12));
}

TEST_CASE("vacuum detection against the ideal-gas threshold") {
  // Threshold velocity separation is 2(c_l + c_r)/(gamma - 1).
  const double cl = std::sqrt(1.4);
  const double cr = std::sqrt(1.4 * 0.1 / 0.125);
  const double crit = 2.0 * (cl + cr) / 0.4;
  CHECK(crit == Catch::Approx(11.2075824052288).epsilon(1e-12));

  const VacuumCheck vc = check_vacuum(kAir, kSodL, kAir, kSodR);
  CHECK(vc.converged);
  CHECK(vc.margin == Catch::Approx(crit).epsilon(1e-6));
  CHECK(vc.integral_l == Catch::Approx(2.0 * cl / 0.4).epsilon(1e-6));
  CHECK(vc.integral_r == Catch::Approx(2.0 * cr / 0.4).epsilon(1e-6));

  const FluidState l{1.0, -0.51 * crit, 1.0};
  const FluidState r{0.125, 0.51 * crit, 0.1};
  CHECK_THROWS_AS(solve_star(kAir, l, kAir, r), VacuumError);
}

TEST_CASE("stiffened-gas vacuum integral stops at finite pressure") {
  // The water isentrope hits rho -> 0 at p -> -p_inf, so the p -> 0 integral
  // converges to a small closed-form value.
  const EosModel water{StiffenedGas{7.15, 3.31e8}};
  const FluidState k{1000.0, 0.0, 1e5};
  const double ck = sound_speed(water, 1000.0, 1e5);
  const double exact =
      2.0 * ck / 6.15 *
      (1.0 - std::pow(3.31e8 / (1e5 + 3.31e8), 6.15 / (2.0 * 7.15)));
  CHECK(exact == Catch::Approx(0.0649987150282602).epsilon(1e-12));

  const VacuumCheck vc = check_vacuum(kAir, kSodL, water, k);
  CHECK(vc.integral_r == Catch::Approx(exact).epsilon(1e-5));
}

TEST_CASE("near-vacuum symmetric expansion keeps a bracketable root") {
  // Two equal opposed rarefactions: p* has a closed form for ideal gas.
  const FluidState l{1.0, -3.0, 0.4};
  const FluidState r{1.0, 3.0, 0.4};
  const double c = std::sqrt(1.4 * 0.4);
  const double base = 1.0 - 0.4 * 3.0 / (2.0 * c);
  const double p_exact = 0.4 * std::pow(base, 2.0 * 1.4 / 0.4);

  SolveOptions opt;
  opt.substeps = 512;
  const StarState st = solve_star(kAir, l, kAir, r, opt);
  CHECK(st.p == Catch::Approx(p_exact).epsilon(1e-6));
  CHECK(st.u == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("star state matches the classical ideal-gas solver") {
  const oracle::Star ex = oracle::ideal_star({1.0, 0.0, 1.0, 1.4},
                                             {0.125, 0.0, 0.1, 1.4});
  CHECK(ex.p == Catch::Approx(0.303130178050647).epsilon(1e-13));
  CHECK(ex.u == Catch::Approx(0.927452620048950).epsilon(1e-13));
  CHECK(ex.rho_l == Catch::Approx(0.426319428178495).epsilon(1e-13));
  CHECK(ex.rho_r == Catch::Approx(0.265573711705307).epsilon(1e-13));

  const StarState st = solve_star(kAir, kSodL, kAir, kSodR);
  CHECK(st.p == Catch::Approx(ex.p).epsilon(1e-7));
  CHECK(st.u == Catch::Approx(ex.u).epsilon(1e-7));
  CHECK(st.rho_l == Catch::Approx(ex.rho_l).epsilon(1e-7));
  CHECK(st.rho_r == Catch::Approx(ex.rho_r).epsilon(1e-7));
  CHECK(st.wave_l == WaveType::rarefaction);
  CHECK(st.wave_r == WaveType::shock);
  CHECK(st.iterations <= 50);

  // Wave speeds: rarefaction head/tail and the exact shock speed.
  CHECK(st.speeds_l.head == Catch::Approx(-1.18321595661992).epsilon(1e-9));
  CHECK(st.speeds_l.tail == Catch::Approx(-0.0702728125611833).epsilon(1e-6));
  CHECK(st.speeds_r.head == Catch::Approx(1.75215573203018).epsilon(1e-7));
  CHECK(st.speeds_r.tail == st.speeds_r.head);
}

TEST_CASE("benchmark star states stay pinned to oversampled references") {
  struct Ref {
    const char* name;
    double p, u;
  };
  // Frozen from bisection with 4096 rarefaction sub-steps and 1e-12
  // Hugoniot solves.
  const Ref refs[] = {
      {"shyue", 4.4071013039e11, 1.6952364726e4},
      {"gas_water_sg", 3.6532579948e9, 8.7947553819e2},
      {"gas_water_poly", 3.3802788961e9, 9.7526780422e2},
      {"jwl_poly", 3.3384447327e9, 9.6710812146e2},
  };
  for (const Ref& ref : refs) {
    const StarState st = solve_problem(ref.name);
    INFO(ref.name);
    CHECK(st.p == Catch::Approx(ref.p).epsilon(1e-7));
    CHECK(st.u == Catch::Approx(ref.u).epsilon(1e-7));
    CHECK(st.iterations <= 50);
    CHECK(st.wave_l == WaveType::rarefaction);
    CHECK(st.wave_r == WaveType::shock);
  }
}

TEST_CASE("matched initial pressures and velocities solve in one step") {
  const StarState st = solve_problem("saurel");
  CHECK(st.p == 2e10);
  CHECK(st.u == 1000.0);
  CHECK(st.iterations == 1);
}

TEST_CASE("galilean shift moves the star velocity and nothing else") {
  const ProblemSetup p = builtin_problem("jwl_poly");
  const StarState base = solve_star(p.eos_minus, p.minus, p.eos_plus, p.plus);
  for (double du : {10.0, -10.0, 1e3, -1e3}) {
    FluidState l = p.minus, r = p.plus;
    l.u += du;
    r.u += du;
    const StarState st = solve_star(p.eos_minus, l, p.eos_plus, r);
    INFO("du=" << du);
    CHECK(st.p == Catch::Approx(base.p).epsilon(1e-10));
    CHECK(st.rho_l == Catch::Approx(base.rho_l).epsilon(1e-10));
    CHECK(st.rho_r == Catch::Approx(base.rho_r).epsilon(1e-10));
    CHECK(st.u == base.u + du);
  }
}

TEST_CASE("mirror symmetry negates the star velocity") {
  const ProblemSetup p = builtin_problem("gas_water_sg");
  const StarState base = solve_star(p.eos_minus, p.minus, p.eos_plus, p.plus);
  const FluidState l{p.plus.rho, -p.plus.u, p.plus.p};
  const FluidState r{p.minus.rho, -p.minus.u, p.minus.p};
  const StarState st = solve_star(p.eos_plus, l, p.eos_minus, r);
  CHECK(st.p == Catch::Approx(base.p).epsilon(1e-10));
  CHECK(st.u == -base.u);
  CHECK(st.rho_l == Catch::Approx(base.rho_r).epsilon(1e-10));
  CHECK(st.rho_r == Catch::Approx(base.rho_l).epsilon(1e-10));
}

TEST_CASE("input validation distinguishes setup errors from evolution") {
  const EosModel water{detail::poly_water()};
  // Expanded below the guaranteed interval: rejected at the input gate.
  CHECK_THROWS_AS(validate_state(water, {50.0, 0.0, 1e5}, "test"),
                  EosDomainError);
  CHECK_THROWS_AS(validate_state(water, {1000.0, 0.0, -1.0}, "test"),
                  EosDomainError);
  CHECK_NOTHROW(validate_state(water, {1000.0, 0.0, 1e5}, "test"));
  // The wave-curve entry check only demands positive density and pressure.
  CHECK_NOTHROW(solve_star(water, {150.0, 0.0, 1e5}, water, {160.0, 0.0, 2e5}));
}

TEST_CASE("similarity sampler agrees with the exact ideal-gas profile") {
  const oracle::IdealSide ol{1.0, 0.0, 1.0, 1.4};
  const oracle::IdealSide orr{0.125, 0.0, 0.1, 1.4};
  const oracle::Star ex = oracle::ideal_star(ol, orr);

  const StarState st = solve_star(kAir, kSodL, kAir, kSodR);
  const RiemannFan fan(kAir, kSodL, kAir, kSodR, st);

  // Interior of the left fan at xi = -0.5; frozen from the closed form.
  const FluidState mid = fan.sample(-0.5).state;
  CHECK(mid.rho == Catch::Approx(0.602937696498181).epsilon(1e-6));
  CHECK(mid.u == Catch::Approx(0.569346630516603).epsilon(1e-6));
  CHECK(mid.p == Catch::Approx(0.492471851553223).epsilon(1e-6));

  for (int i = 0; i <= 200; ++i) {
    const double xi = -2.0 + 4.0 * i / 200.0;
    const oracle::Profile want = oracle::ideal_sample(ol, orr, ex, xi);
    const FluidState got =
        sample_solution(kAir, kSodL, kAir, kSodR, st, xi);
    INFO("xi=" << xi);
    CHECK(got.rho == Catch::Approx(want.rho).epsilon(1e-5));
    CHECK(got.p == Catch::Approx(want.p).epsilon(1e-5));
    CHECK(got.u == Catch::Approx(want.u).margin(1e-5));
  }

  CHECK(fan.sample(-2.0).side == -1);
  CHECK(fan.sample(2.0).side == +1);
  CHECK(fan.sample(st.u - 1e-9).side == -1);
  CHECK(fan.sample(st.u + 1e-9).side == +1);
}

TEST_CASE("tight tolerances agree with the oversampled bisection oracle") {
  const ProblemSetup p = builtin_problem("gas_water_poly");
  const oracle::Star ref =
      oracle::bisect_star(p.eos_minus, p.minus, p.eos_plus, p.plus);
  const StarState st = solve_star(p.eos_minus, p.minus, p.eos_plus, p.plus);
  CHECK(st.p == Catch::Approx(ref.p).epsilon(1e-7));
  CHECK(st.u == Catch::Approx(ref.u).epsilon(1e-7));
  CHECK(st.rho_l == Catch::Approx(ref.rho_l).epsilon(1e-6));
  CHECK(st.rho_r == Catch::Approx(ref.rho_r).epsilon(1e-6));
}
