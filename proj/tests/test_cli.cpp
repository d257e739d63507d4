#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#ifndef MGFLOW_CLI_PATH
#error "MGFLOW_CLI_PATH must point at the command-line binary"
#endif

namespace {

std::string scratch_dir() {
  static const std::string dir = [] {
    char tmpl[] = "/tmp/mgflow_cli_XXXXXX";
    const char* d = mkdtemp(tmpl);
    REQUIRE(d != nullptr);
    return std::string(d);
  }();
  return dir;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(MGFLOW_CLI_PATH) + " " + args +
                          " >" + scratch_dir() + "/stdout.txt 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -2;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("usage and configuration errors exit with code 2") {
  CHECK(run_cli("--help") == 0);
  CHECK(run_cli("solve") == 2);                      // no problem given
  CHECK(run_cli("solve --problem nonsense") == 2);   // unknown name
  CHECK(run_cli("solve --problem sod --config x") == 2);  // both sources
  CHECK(run_cli("frobnicate") == 2);                 // unknown subcommand
}

TEST_CASE("solve prints the star state") {
  const std::string out = scratch_dir() + "/sod_star.json";
  REQUIRE(run_cli("solve --problem sod --out " + out) == 0);
  const nlohmann::json j = nlohmann::json::parse(read_file(out));
  CHECK(j["p"].get<double>() == Catch::Approx(0.303130178050647).epsilon(1e-6));
  CHECK(j["u"].get<double>() == Catch::Approx(0.927452620048950).epsilon(1e-6));
  CHECK(j["wave_l"] == "rarefaction");
  CHECK(j["wave_r"] == "shock");
}

TEST_CASE("separating states exit with the vacuum code") {
  // Build a config whose velocities exceed the vacuum threshold.
  const std::string cfg = scratch_dir() + "/vacuum.json";
  REQUIRE(run_cli("export-problem --problem sod --out " + cfg) == 0);
  nlohmann::ordered_json j = nlohmann::ordered_json::parse(read_file(cfg));
  j["minus"]["state"]["u"] = -6.0;
  j["plus"]["state"]["u"] = 6.0;  // separation 12 > 11.2076
  std::ofstream(cfg) << j.dump(2);
  CHECK(run_cli("solve --config " + cfg) == 3);
}

TEST_CASE("out-of-domain inputs exit with the domain code") {
  const std::string cfg = scratch_dir() + "/expanded.json";
  REQUIRE(run_cli("export-problem --problem gas_water_poly --out " + cfg) == 0);
  nlohmann::ordered_json j = nlohmann::ordered_json::parse(read_file(cfg));
  j["plus"]["state"]["rho"] = 50.0;  // below the guaranteed interval
  std::ofstream(cfg) << j.dump(2);
  CHECK(run_cli("solve --config " + cfg) == 5);
  CHECK(run_cli("run --config " + cfg) == 5);
}

TEST_CASE("run writes a manifest with tiny conservation drift") {
  const std::string dir = scratch_dir() + "/shyue400";
  REQUIRE(run_cli("run --problem shyue --cells 400 --out " + dir) == 0);
  const nlohmann::json m =
      nlohmann::json::parse(read_file(dir + "/manifest.json"));
  CHECK(m["steps"].get<long>() > 100);
  CHECK(m["conservation"]["mass_minus"].get<double>() < 1e-12);
  CHECK(m["conservation"]["mass_plus"].get<double>() < 1e-12);
  CHECK(m["conservation"]["momentum"].get<double>() < 1e-12);
  CHECK(m["conservation"]["energy"].get<double>() < 1e-12);
  const std::string csv = read_file(dir + "/final.csv");
  CHECK(csv.rfind("x,rho,u,p,e,fluid\n", 0) == 0);
}

TEST_CASE("identical configuration reproduces byte-identical output") {
  const std::string d1 = scratch_dir() + "/rep1";
  const std::string d2 = scratch_dir() + "/rep2";
  REQUIRE(run_cli("run --problem sod --cells 64 --out " + d1) == 0);
  REQUIRE(run_cli("run --problem sod --cells 64 --out " + d2) == 0);
  CHECK(read_file(d1 + "/final.csv") == read_file(d2 + "/final.csv"));
}

TEST_CASE("profile emits the sampled similarity solution") {
  const std::string out = scratch_dir() + "/sod_profile.csv";
  REQUIRE(run_cli("profile --problem sod --points 100 --out " + out) == 0);
  const std::string csv = read_file(out);
  CHECK(csv.rfind("x,rho,u,p,e,fluid\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 101);
}

TEST_CASE("eos report covers both sides") {
  CHECK(run_cli("check-eos --problem jwl_poly") == 0);
  CHECK(run_cli("check-eos --problem gas_water_sg") == 0);
}
