#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <mgflow/mgflow.hpp>

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace mgflow;

namespace {

struct CommonArgs {
  std::string problem;
  std::string config_path;
  int cells = 0;
  double cfl = 0.0;
  double tol = 0.0;
  int substeps = 0;
  int max_iter = 0;
  std::vector<double> gauges;
  std::vector<double> snapshots;
  bool gauges_set = false;
  bool snapshots_set = false;
  std::string out;
  bool as_json = false;
  bool positive_phase_only = false;
};

void add_setup_options(CLI::App* cmd, CommonArgs* a) {
  cmd->add_option("--problem", a->problem, "builtin problem name");
  cmd->add_option("--config", a->config_path, "problem description file (JSON)");
}

void add_override_options(CLI::App* cmd, CommonArgs* a) {
  cmd->add_option("--cells", a->cells, "override cell count");
  cmd->add_option("--cfl", a->cfl, "override CFL number");
  cmd->add_option("--tol", a->tol, "star-state iteration tolerance");
  cmd->add_option("--substeps", a->substeps,
                  "RK4 sub-steps per rarefaction evaluation");
  cmd->add_option("--max-iter", a->max_iter, "star-state iteration budget");
}

ProblemSetup load_setup(const CommonArgs& a) {
  if (!a.problem.empty() && !a.config_path.empty())
    throw ConfigError("pass either --problem or --config, not both");
  ProblemSetup p = [&] {
    if (!a.problem.empty()) return builtin_problem(a.problem);
    if (!a.config_path.empty()) {
      std::ifstream in(a.config_path);
      if (!in) throw ConfigError("cannot read '" + a.config_path + "'");
      json j;
      try {
        j = json::parse(in);
      } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed JSON: ") + e.what());
      }
      return problem_from_json(j);
    }
    throw ConfigError("one of --problem or --config is required");
  }();
  if (a.cells > 0) p.config.cells = a.cells;
  if (a.cfl > 0.0) p.config.cfl = a.cfl;
  if (a.tol > 0.0) p.config.solver.tol = a.tol;
  if (a.substeps > 0) p.config.solver.substeps = a.substeps;
  if (a.max_iter > 0) p.config.solver.max_iter = a.max_iter;
  if (a.gauges_set) p.config.gauges = a.gauges;
  if (a.snapshots_set) p.config.snapshot_times = a.snapshots;
  validate_state(p.eos_minus, p.minus, "lower-fluid");
  validate_state(p.eos_plus, p.plus, "upper-fluid");
  return p;
}

const char* wave_name(WaveType w) {
  return w == WaveType::shock ? "shock" : "rarefaction";
}

json star_to_json(const StarState& st) {
  json j;
  j["p"] = st.p;
  j["u"] = st.u;
  j["rho_l"] = st.rho_l;
  j["rho_r"] = st.rho_r;
  j["wave_l"] = wave_name(st.wave_l);
  j["wave_r"] = wave_name(st.wave_r);
  j["speeds_l"] = {st.speeds_l.head, st.speeds_l.tail};
  j["speeds_r"] = {st.speeds_r.head, st.speeds_r.tail};
  j["iterations"] = st.iterations;
  j["residual"] = st.residual;
  return j;
}

void emit(const json& j, const std::string& out_path, bool as_json,
          const std::string& human) {
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw Error("cannot open '" + out_path + "' for writing");
    out << j.dump(2) << '\n';
  }
  if (as_json)
    std::cout << j.dump(2) << '\n';
  else
    std::cout << human;
}

int cmd_solve(const CommonArgs& a) {
  const ProblemSetup p = load_setup(a);
  const StarState st =
      solve_star(p.eos_minus, p.minus, p.eos_plus, p.plus, p.config.solver);
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "star pressure  %.10e\n"
                "star velocity  %.10e\n"
                "left  wave     %s  rho*=%.10e  speeds [%.6e, %.6e]\n"
                "right wave     %s  rho*=%.10e  speeds [%.6e, %.6e]\n"
                "iterations     %d  (residual %.3e)\n",
                st.p, st.u, wave_name(st.wave_l), st.rho_l, st.speeds_l.head,
                st.speeds_l.tail, wave_name(st.wave_r), st.rho_r,
                st.speeds_r.head, st.speeds_r.tail, st.iterations,
                st.residual);
  emit(star_to_json(st), a.out, a.as_json, buf);
  return 0;
}

int cmd_run(const CommonArgs& a) {
  const ProblemSetup p = load_setup(a);
  TwoMediumSim sim = make_simulation(p);
  SimResult res = sim.run();

  json manifest;
  manifest["problem"] = problem_to_json(p);
  manifest["steps"] = res.steps;
  manifest["t_final"] = res.t_final;
  manifest["interface_x"] = res.interface_x;
  manifest["wall_seconds"] = res.wall_seconds;
  manifest["conservation"] = {
      {"mass_minus", res.conservation.drift_mass_minus},
      {"mass_plus", res.conservation.drift_mass_plus},
      {"momentum", res.conservation.drift_momentum},
      {"energy", res.conservation.drift_energy}};

  json gauges = json::array();
  for (size_t g = 0; g < p.config.gauges.size(); ++g) {
    const ShockMetrics m = shock_metrics(res.gauge_records[g],
                                         p.config.p_ambient,
                                         a.positive_phase_only);
    json jg;
    jg["position"] = p.config.gauges[g];
    jg["peak_overpressure"] = m.peak_overpressure;
    jg["arrived"] = m.arrived;
    if (m.arrived) jg["arrival_time"] = m.arrival_time;
    jg["impulse"] = m.impulse;
    gauges.push_back(jg);
  }
  manifest["gauges"] = gauges;

  std::string human;
  {
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "%s: %ld steps to t=%.6e, interface at %.10e\n"
                  "conservation drift: mass[%.3e, %.3e] momentum %.3e "
                  "energy %.3e\n",
                  p.name.c_str(), res.steps, res.t_final, res.interface_x,
                  res.conservation.drift_mass_minus,
                  res.conservation.drift_mass_plus,
                  res.conservation.drift_momentum,
                  res.conservation.drift_energy);
    human = buf;
    for (const auto& jg : gauges) {
      std::snprintf(buf, sizeof buf,
                    "gauge %8.3f: peak %.6e  arrival %s  impulse %.6e\n",
                    jg["position"].get<double>(),
                    jg["peak_overpressure"].get<double>(),
                    jg["arrived"].get<bool>()
                        ? format_full(jg["arrival_time"].get<double>()).c_str()
                        : "never",
                    jg["impulse"].get<double>());
      human += buf;
    }
  }

  if (!a.out.empty()) {
    fs::create_directories(a.out);
    const fs::path dir(a.out);
    write_snapshot_csv((dir / "final.csv").string(), sim.snapshot());
    json files;
    files["final"] = "final.csv";
    json snaps = json::array();
    for (size_t s = 0; s < res.snapshots.size(); ++s) {
      char name[64];
      std::snprintf(name, sizeof name, "snapshot_%03zu.csv", s);
      write_snapshot_csv((dir / name).string(), res.snapshots[s]);
      snaps.push_back({{"t", res.snapshots[s].t}, {"file", name}});
    }
    files["snapshots"] = snaps;
    json grecs = json::array();
    for (size_t g = 0; g < res.gauge_records.size(); ++g) {
      char name[64];
      std::snprintf(name, sizeof name, "gauge_%03zu.csv", g);
      write_gauge_csv((dir / name).string(), res.gauge_records[g]);
      grecs.push_back({{"position", p.config.gauges[g]}, {"file", name}});
    }
    files["gauge_files"] = grecs;
    manifest["files"] = files;
    std::ofstream mf(dir / "manifest.json");
    if (!mf) throw Error("cannot write manifest");
    mf << manifest.dump(2) << '\n';
    human += "outputs in " + a.out + "\n";
  }

  if (a.as_json)
    std::cout << manifest.dump(2) << '\n';
  else
    std::cout << human;
  return 0;
}

int cmd_profile(const CommonArgs& a, double t, int points) {
  const ProblemSetup p = load_setup(a);
  if (t <= 0.0) t = p.config.t_end;
  if (t <= 0.0) throw ConfigError("profile needs a positive --time");
  const StarState st =
      solve_star(p.eos_minus, p.minus, p.eos_plus, p.plus, p.config.solver);
  const RiemannFan fan(p.eos_minus, p.minus, p.eos_plus, p.plus, st);

  std::string text = "x,rho,u,p,e,fluid\n";
  for (int i = 0; i < points; ++i) {
    const double x = p.config.x_lo + (i + 0.5) * (p.config.x_hi - p.config.x_lo) / points;
    const double xi = (x - p.config.interface_x) / t;
    const RiemannFan::Sample s = fan.sample(xi);
    const EosModel& eos = s.side < 0 ? p.eos_minus : p.eos_plus;
    const double e = internal_energy(eos, s.state.rho, s.state.p);
    text += format_full(x) + ',' + format_full(s.state.rho) + ',' +
            format_full(s.state.u) + ',' + format_full(s.state.p) + ',' +
            format_full(e) + ',' + (s.side < 0 ? "minus" : "plus") + "\n";
  }
  if (!a.out.empty()) {
    std::ofstream out(a.out);
    if (!out) throw Error("cannot open '" + a.out + "' for writing");
    out << text;
  } else {
    std::cout << text;
  }
  return 0;
}

int cmd_check_eos(const CommonArgs& a) {
  const ProblemSetup p = load_setup(a);
  json report = json::array();
  std::string human;
  const struct {
    const char* label;
    const EosModel* eos;
    const FluidState* ref;
  } sides[2] = {{"minus", &p.eos_minus, &p.minus},
                {"plus", &p.eos_plus, &p.plus}};
  for (const auto& side : sides) {
    const EosModel& eos = *side.eos;
    const DensityInterval dom = validity_domain(eos);
    const FluidState& ref = *side.ref;
    const double e_ref = internal_energy(eos, ref.rho, ref.p);
    const double c_ref = sound_speed(eos, ref.rho, ref.p);

    // sweep a density/energy box around the reference state, inside the
    // usable interval, and track the worst hyperbolicity/convexity margins.
    // States with nonpositive pressure (tension, e.g. cold expanded water)
    // sit outside the EOS's physical state space and are skipped.
    double min_c2 = std::numeric_limits<double>::infinity();
    double min_g = std::numeric_limits<double>::infinity();
    long swept = 0;
    const double rlo = std::max(dom.lo, 0.25 * ref.rho);
    const double rhi = std::min(dom.hi, 4.0 * ref.rho);
    for (int i = 0; i <= 50; ++i) {
      const double rho = rlo + (rhi - rlo) * i / 50.0;
      if (!(rho > 0.0)) continue;
      for (int k = 1; k <= 50; ++k) {
        const double e = e_ref * 4.0 * k / 50.0;
        const CoeffBundle c = coefficients(eos, rho);
        const double pr = c.gamma * rho * e + c.h;
        if (!(pr > 0.0)) continue;
        const double c2 = detail::sound_speed_sq(c, rho, pr);
        min_c2 = std::min(min_c2, c2);
        if (c2 > 0.0)
          min_g = std::min(min_g, fundamental_derivative(eos, rho, pr));
        ++swept;
      }
    }
    if (swept == 0) throw Error("no physical states in the swept box");
    json j;
    j["side"] = side.label;
    j["kind"] = eos.kind();
    j["validity"] = {dom.lo, dom.hi};
    j["reference_sound_speed"] = c_ref;
    j["min_c2"] = min_c2;
    j["min_fundamental_derivative"] = min_g;
    report.push_back(j);
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "%s: %s, usable rho in [%.6e, %.6e], c_ref %.6e, "
                  "min c^2 %.6e, min convexity %.6e\n",
                  side.label, eos.kind(), dom.lo, dom.hi, c_ref,
                  min_c2, min_g);
    human += buf;
    if (!(min_c2 > 0.0) || !(min_g > 0.0))
      throw HyperbolicityError(std::string(side.label) +
                               " EOS loses hyperbolicity or convexity in the "
                               "swept state box");
  }
  emit(report, a.out, a.as_json, human);
  return 0;
}

int cmd_export(const CommonArgs& a) {
  const ProblemSetup p = load_setup(a);
  const json j = problem_to_json(p);
  if (!a.out.empty()) {
    std::ofstream out(a.out);
    if (!out) throw Error("cannot open '" + a.out + "' for writing");
    out << j.dump(2) << '\n';
  } else {
    std::cout << j.dump(2) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"two-medium compressible flow solver"};
  app.require_subcommand(1);

  CommonArgs a;
  double profile_time = 0.0;
  int profile_points = 2000;

  CLI::App* solve = app.add_subcommand(
      "solve", "solve one two-medium Riemann problem and print the star state");
  add_setup_options(solve, &a);
  add_override_options(solve, &a);
  solve->add_option("--out", a.out, "write the result as JSON to this file");
  solve->add_flag("--json", a.as_json, "print JSON instead of text");

  CLI::App* run = app.add_subcommand("run", "advance a problem to t_end");
  add_setup_options(run, &a);
  add_override_options(run, &a);
  run->add_option("--gauges", a.gauges, "gauge positions")
      ->delimiter(',')
      ->each([&a](const std::string&) { a.gauges_set = true; });
  run->add_option("--snapshots", a.snapshots, "snapshot times")
      ->delimiter(',')
      ->each([&a](const std::string&) { a.snapshots_set = true; });
  run->add_option("--out", a.out, "output directory for CSVs and manifest");
  run->add_flag("--json", a.as_json, "print the manifest to stdout");
  run->add_flag("--positive-phase-only", a.positive_phase_only,
                "stop impulse integration at the first return to ambient");

  CLI::App* profile = app.add_subcommand(
      "profile", "sample the self-similar single-interface solution");
  add_setup_options(profile, &a);
  add_override_options(profile, &a);
  profile->add_option("--time", profile_time,
                      "sampling time (default: the problem's t_end)");
  profile->add_option("--points", profile_points, "number of sample points");
  profile->add_option("--out", a.out, "output CSV path (default: stdout)");

  CLI::App* check = app.add_subcommand(
      "check-eos", "report validity and convexity margins of both EOS");
  add_setup_options(check, &a);
  check->add_option("--out", a.out, "write the report as JSON to this file");
  check->add_flag("--json", a.as_json, "print JSON instead of text");

  CLI::App* exportp = app.add_subcommand(
      "export-problem", "print a problem description as JSON");
  add_setup_options(exportp, &a);
  exportp->add_option("--out", a.out, "output path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (solve->parsed()) return cmd_solve(a);
    if (run->parsed()) return cmd_run(a);
    if (profile->parsed()) return cmd_profile(a, profile_time, profile_points);
    if (check->parsed()) return cmd_check_eos(a);
    if (exportp->parsed()) return cmd_export(a);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const VacuumError& e) {
    std::cerr << "vacuum: " << e.what() << '\n';
    return 3;
  } catch (const ConvergenceError& e) {
    std::cerr << "no convergence: " << e.what() << '\n';
    return 4;
  } catch (const StepError& e) {
    std::cerr << "time stepping failed: " << e.what() << '\n';
    return 4;
  } catch (const EosDomainError& e) {
    std::cerr << "EOS domain: " << e.what() << '\n';
    return 5;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
