#include <doctest.h>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "necrosim/cli/commands.hpp"
#include "necrosim/errors.hpp"
#include "necrosim/linearization.hpp"

using namespace necrosim;
using namespace necrosim::cli;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("necrosim_cli_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::vector<std::vector<std::string>> read_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("stationary at (2, 1, 1)") {
    const Run r = run({"stationary", "--r1", "2", "--r2", "1", "--psi0", "1"});
    REQUIRE(r.code == kExitOk);
    const json j = json::parse(r.out);
    CHECK(j["solvable"] == true);
    CHECK(std::abs(j["residuals"][0].get<double>()) < 1e-10);
    CHECK(std::abs(j["residuals"][1].get<double>()) < 1e-10);
    CHECK(j["g0_certificate"]["certified"] == true);
    CHECK(j["psi0_critical"].get<double>() > 0);
  }

  TEST_CASE("stationary at the critical constant exits 2") {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", psi0_critical({2, 1}));
    const Run r = run({"stationary", "--r1", "2", "--r2", "1", "--psi0", buf});
    CHECK(r.code == kExitCritical);
    CHECK(json::parse(r.out)["solvable"] == false);
  }

  TEST_CASE("invalid geometry exits 1") {
    CHECK(run({"stationary", "--r2", "3", "--r1", "2"}).code == kExitConfig);
    CHECK(run({"stationary", "--r2", "2", "--r1", "2"}).code == kExitConfig);
    CHECK(run({"stationary", "--psi0", "-1"}).code == kExitConfig);
    CHECK(run({"evolve", "--a", "1"}).code == kExitConfig);
    CHECK(run({"bogus"}).code == kExitConfig);
    CHECK(run({"stationary", "--config", "/nonexistent/config.json"}).code == kExitConfig);
  }

  TEST_CASE("spectrum CSV") {
    const Run r = run({"spectrum", "--r1", "2", "--r2", "1", "--m-max", "40"});
    REQUIRE(r.code == kExitOk);
    const auto rows = read_csv(r.out);
    REQUIRE(rows.size() == 42);
    CHECK(rows[0][0] == "m");
    for (int m = 0; m <= 40; ++m) {
      const auto& row = rows[m + 1];
      CHECK(std::stoi(row[0]) == m);
      const ModeSymbol s = principal_symbol({2, 1}, m);
      CHECK(std::stod(row[1]) == s.matrix(0, 0));
      CHECK(std::stod(row[2]) == s.matrix(0, 1));
      CHECK(std::stod(row[3]) == s.matrix(1, 0));
      CHECK(std::stod(row[4]) == s.matrix(1, 1));
    }
    for (int c = 1; c <= 8; ++c) CHECK(std::stod(rows[1][c]) == 0.0);
    for (int m = 10; m < 40; ++m) CHECK(std::stod(rows[m + 2][5]) < std::stod(rows[m + 1][5]));
  }

  TEST_CASE("evolve at the stationary annulus reports drift < 1e-6") {
    const fs::path dir = scratch("stationary");
    const Run r = run({"evolve", "--modes", "16", "--t-end", "0.05", "--dt", "1e-3", "--out", dir.string()});
    REQUIRE(r.code == kExitOk);
    const json m = json::parse(slurp(dir / "manifest.json"));
    CHECK(m["reason"] == "Completed");
    CHECK(m["max_drift"].get<double>() < 1e-6);
    const auto coeffs = read_csv(slurp(dir / "coefficients.csv"));
    REQUIRE(!coeffs.empty());
    CHECK(coeffs[0] == std::vector<std::string>{"t", "interface", "m", "re", "im"});
    CHECK(coeffs.size() == 1 + 51 * 2 * 17);
    CHECK(fs::exists(dir / "samples.csv"));
  }

  TEST_CASE("single-mode seed decay column") {
    const fs::path dir = scratch("decay");
    const Run r = run({"evolve", "--modes", "32", "--t-end", "0.01", "--dt", "1e-4", "--seed", "1:8:1e-4", "--out",
                       dir.string()});
    REQUIRE(r.code == kExitOk);
    const auto rows = read_csv(slurp(dir / "decay.csv"));
    REQUIRE(rows.size() == 2);
    CHECK(rows[1][0] == "8");
    CHECK(std::stod(rows[1][4]) == doctest::Approx(1.0).epsilon(0.10));
  }

  TEST_CASE("collision scenario") {
    const fs::path dir = scratch("collision");
    const Run r = run({"evolve", "--modes", "16", "--seed", "1:2:0.5", "--out", dir.string()});
    CHECK(r.code == kExitOk);
    CHECK(json::parse(slurp(dir / "manifest.json"))["reason"] == "InterfaceCollision");
  }

  TEST_CASE("byte-identical output for identical configs") {
    const fs::path a = scratch("det_a"), b = scratch("det_b");
    for (const fs::path& d : {a, b}) {
      REQUIRE(run({"evolve", "--modes", "16", "--t-end", "0.02", "--seed", "2:3:0.01:0.5", "--out", d.string()}).code == 0);
    }
    CHECK(slurp(a / "coefficients.csv") == slurp(b / "coefficients.csv"));
    CHECK(slurp(a / "samples.csv") == slurp(b / "samples.csv"));
    CHECK(slurp(a / "decay.csv") == slurp(b / "decay.csv"));
  }

  TEST_CASE("verify exit codes and fault injection") {
    const Run ok = run({"verify", "--modes", "32"});
    CHECK(ok.code == kExitOk);
    CHECK(ok.out.find("tolerance=") != std::string::npos);
    CHECK(ok.out.find("measured=") != std::string::npos);
    setenv("NECROSIM_FAULT", "bessel", 1);
    const Run bad = run({"verify", "--modes", "32"});
    unsetenv("NECROSIM_FAULT");
    CHECK(bad.code == kExitVerify);
    CHECK(bad.out.find("FAIL bessel_wronskian") != std::string::npos);
  }

  TEST_CASE("config round trip") {
    RunConfig c;
    c.geometry = {3.0, 1.25};
    c.derive_stationary = false;
    c.A = 0.3;
    c.G = 12.0;
    c.psi0 = 0.7;
    c.modes = 24;
    c.radial_points = 40;
    c.scheme = RadialScheme::kFiniteDifference;
    c.t_end = 0.25;
    c.dt = 2e-4;
    c.output_every = 0.05;
    c.seeds = {{1, 3, 0.01, 0.1}, {2, 0, -0.02, 0.0}};
    c.amplitude_bound = 0.2;
    c.m_max = 12;
    c.sweep_psi0 = {0.5, 1.0 / 3.0};
    c.output_dir = "somewhere";
    CHECK(parse_config(to_json_string(c)) == c);
    CHECK(parse_config(to_json_string(RunConfig{})) == RunConfig{});
  }

  TEST_CASE("config validation") {
    CHECK_THROWS_AS(parse_config(R"({"geometry": {"R1": 2, "R2": 1, "R3": 0}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"geometry": {"R1": "two"}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"bio": {"A": 1}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"seeds": [{"interface": 3}]})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"amplitude_bound": 0.5})"), ConfigError);
    CHECK_THROWS_AS(parse_config("{not json"), ConfigError);
    CHECK_THROWS_AS(parse_seed("1:2"), ConfigError);
    CHECK(parse_seed("2:5:0.1:0.3") == SeedSpec{2, 5, 0.1, 0.3});
  }

  TEST_CASE("flags override the config file") {
    const fs::path dir = scratch("override");
    fs::create_directories(dir);
    std::ofstream(dir / "run.json") << R"({"geometry": {"R1": 3, "R2": 1}, "bio": {"psi0": 2}})";
    const Run r = run({"stationary", "--config", (dir / "run.json").string(), "--psi0", "1"});
    REQUIRE(r.code == kExitOk);
    const json j = json::parse(r.out);
    CHECK(j["R1"] == 3.0);
    CHECK(j["psi0"] == 1.0);
  }

  TEST_CASE("sweep runs independent trajectories") {
    const fs::path dir = scratch("sweep");
    const Run r = run({"sweep", "--modes", "8", "--t-end", "0.01", "--psi0-list", "0.5,1,2", "--out", dir.string()});
    REQUIRE(r.code == kExitOk);
    const auto rows = read_csv(slurp(dir / "sweep.csv"));
    REQUIRE(rows.size() == 4);
    for (int k = 0; k < 3; ++k) {
      CHECK(rows[k + 1][2] == "1");
      CHECK(rows[k + 1][5] == "Completed");
      CHECK(fs::exists(dir / ("run_" + std::to_string(k)) / "manifest.json"));
    }
    CHECK(run({"sweep"}).code == kExitConfig);
  }
}
