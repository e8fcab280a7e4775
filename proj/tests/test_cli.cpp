// Copyright 2026 The Flotilla Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>
#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

const std::string kCli = FLOTILLA_CLI;
const fs::path kSource = FLOTILLA_SOURCE_DIR;

fs::path Scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("flotilla_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

// Runs the CLI with stdout and stderr captured in `dir`. Returns the exit
// status.
int Run(const std::string& args, const fs::path& dir) {
  const std::string cmd = "'" + kCli + "' " + args + " > '" +
                          (dir / "stdout.txt").string() + "' 2> '" +
                          (dir / "stderr.txt").string() + "'";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json ReadJson(const fs::path& p) { return json::parse(Slurp(p)); }

void WriteText(const fs::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

TEST_SUITE("cli") {
  TEST_CASE("empty scenario exits 1 with every missing field") {
    const auto dir = Scratch("empty");
    WriteText(dir / "empty.json", "{}");
    CHECK(Run("validate --scenario '" + (dir / "empty.json").string() + "'",
              dir) == 1);
    const auto err = ReadJson(dir / "stderr.txt");
    CHECK(err["error"] == "validation");
    CHECK(err["issues"].size() >= 4);
    CHECK(Run("run --scenario '" + (dir / "empty.json").string() + "' --out '" +
                  (dir / "out").string() + "'",
              dir) == 1);
  }

  TEST_CASE("validate prints the scenario hash") {
    const auto dir = Scratch("validate");
    CHECK(Run("validate --scenario '" +
                  (kSource / "scenarios/five_boat_velocity.json").string() + "'",
              dir) == 0);
    const auto out = ReadJson(dir / "stdout.txt");
    CHECK(out["valid"] == true);
    CHECK(out["scenario_hash"].get<std::string>().size() == 16);
  }

  TEST_CASE("run writes artifacts") {
    const auto dir = Scratch("run");
    CHECK(Run("run --scenario '" +
                  (kSource / "scenarios/five_boat_velocity.json").string() +
                  "' --seed 3 --out '" + (dir / "out").string() + "'",
              dir) == 0);
    for (const char* f : {"series.csv", "metrics.json", "certificate.json"}) {
      CHECK(fs::exists(dir / "out" / f));
    }
    const auto header = Slurp(dir / "out/series.csv").substr(0, 40);
    CHECK(header.rfind("t,x,y,yaw,v_y,v_x,omega,", 0) == 0);
    const auto m = ReadJson(dir / "out/metrics.json");
    CHECK(m["seed"] == 3);
    CHECK(m["certificate_ok"] == true);
  }

  TEST_CASE("run rejects fewer than 720 samples per cycle") {
    const auto dir = Scratch("spc");
    CHECK(Run("run --scenario '" +
                  (kSource / "scenarios/five_boat_velocity.json").string() +
                  "' --samples-per-cycle 100 --out '" + (dir / "out").string() +
                  "'",
              dir) == 1);
  }

  TEST_CASE("gamma override fails certification with exit 2") {
    const auto dir = Scratch("gamma");
    CHECK(Run("run --scenario '" +
                  (kSource / "scenarios/gamma_override_failure.json").string() +
                  "' --out '" + (dir / "out").string() + "'",
              dir) == 2);
    const auto cert = ReadJson(dir / "out/certificate.json");
    CHECK(cert["ok"] == false);
  }

  TEST_CASE("collision map without protrusion is empty") {
    const auto dir = Scratch("cmap0");
    CHECK(Run("collision-map --r-p 0 --resolution 0.1 --out '" +
                  (dir / "out").string() + "'",
              dir) == 0);
    const auto s = ReadJson(dir / "out/collision_map.json");
    CHECK(s["colliding_cells"] == 0);
    CHECK(s["components"] == 0);
  }

  TEST_CASE("component count is stable across resolutions") {
    const auto dir = Scratch("cmap");
    CHECK(Run("collision-map --resolution 0.1 --out '" + (dir / "a").string() +
                  "'",
              dir) == 0);
    CHECK(Run("collision-map --resolution 0.03 --out '" + (dir / "b").string() +
                  "'",
              dir) == 0);
    CHECK(ReadJson(dir / "a/collision_map.json")["components"] ==
          ReadJson(dir / "b/collision_map.json")["components"]);
    CHECK(Slurp(dir / "a/collision_map.pgm").rfind("P2", 0) == 0);
  }

  TEST_CASE("fit drag-linear recovers the drag coefficient") {
    const auto dir = Scratch("fitlin");
    std::ostringstream csv;
    csv << "t,v\n";
    const double c = 9.75, m = 2.64, v0 = 0.1;
    for (int i = 0; i < 300; ++i) {
      const double t = 0.2 * i;
      csv << t << ',' << v0 / (1.0 + c * v0 / m * t) << '\n';
    }
    WriteText(dir / "decay.csv", csv.str());
    CHECK(Run("fit drag-linear --input '" + (dir / "decay.csv").string() +
                  "' --mass 2.64 --out '" + (dir / "out").string() + "'",
              dir) == 0);
    const auto r = ReadJson(dir / "out/fit.json");
    CHECK(std::abs(r["c_l_kg_per_m"].get<double>() - c) < 0.01 * c);
  }

  TEST_CASE("fit alpha from thrust samples") {
    const auto dir = Scratch("fitalpha");
    std::ostringstream csv;
    csv << "k,amplitude,force\n";
    const double slopes[] = {0.01, 0.01, 0.0172};
    for (int k = 0; k < 3; ++k) {
      for (double a = 1.0; a <= 2.5; a += 0.5) {
        csv << k << ',' << a << ',' << slopes[k] * (a - 0.75) << '\n';
      }
    }
    WriteText(dir / "thrust.csv", csv.str());
    CHECK(Run("fit alpha --input '" + (dir / "thrust.csv").string() +
                  "' --out '" + (dir / "out").string() + "'",
              dir) == 0);
    const auto r = ReadJson(dir / "out/fit.json");
    CHECK(std::abs(r["alpha"][1].get<double>() - 0.72) < 1e-6);
  }

  TEST_CASE("malformed CSV exits 1") {
    const auto dir = Scratch("badcsv");
    WriteText(dir / "bad.csv", "time,speed\n0,abc\n");
    CHECK(Run("fit drag-linear --mass 1 --input '" + (dir / "bad.csv").string() +
                  "' --out '" + (dir / "out").string() + "'",
              dir) == 1);
    WriteText(dir / "short.csv", "t,v\n0,0.1\n1,0.09\n");
    CHECK(Run("fit drag-linear --mass 1 --input '" +
                  (dir / "short.csv").string() + "' --out '" +
                  (dir / "out").string() + "'",
              dir) == 1);
    CHECK(ReadJson(dir / "stderr.txt")["error"] == "fit");
  }

  TEST_CASE("certify a command set") {
    const auto dir = Scratch("certify");
    WriteText(dir / "ok.json", R"({
      "configuration": {"cells": [[0, 0], [1, 0], [0, 1], [1, 1]]},
      "commands": [{"amplitude": 2.5}, {"amplitude": 2.5},
                   {"amplitude": 2.5}, {"amplitude": 2.5}]
    })");
    CHECK(Run("certify --commands '" + (dir / "ok.json").string() +
                  "' --out '" + (dir / "out").string() + "'",
              dir) == 0);
    WriteText(dir / "bad.json", R"({
      "configuration": {"cells": [[0, 0], [0, 1], [1, 1]]},
      "commands": [{"amplitude": 2.7}, {"amplitude": 0.9},
                   {"amplitude": 0.9}]
    })");
    CHECK(Run("certify --commands '" + (dir / "bad.json").string() +
                  "' --out '" + (dir / "out2").string() + "'",
              dir) == 2);
    CHECK(ReadJson(dir / "out2/certificate.json")["collision"] == true);
  }

  TEST_CASE("sweep runs the cartesian product") {
    const auto dir = Scratch("sweep");
    CHECK(Run("sweep --scenario '" +
                  (kSource / "scenarios/sweeps/velocity_yaw_grid.json").string() +
                  "' --out '" + (dir / "out").string() + "'",
              dir) == 0);
    const auto summary = ReadJson(dir / "out/sweep.json");
    CHECK(summary["runs"].size() == 8);
    CHECK(fs::exists(dir / "out/run_0007/series.csv"));
  }

  TEST_CASE("gamma-max reports a constrained search") {
    const auto dir = Scratch("gmax");
    CHECK(Run("gamma-max --resolution 0.02", dir) == 0);
    const auto r = ReadJson(dir / "stdout.txt");
    CHECK(r["constrained"] == true);
    CHECK(r["gamma_max"].get<double>() > 1.0);
  }
}

}  // namespace
