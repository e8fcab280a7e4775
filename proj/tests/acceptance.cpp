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

// Acceptance checks. Prints one PASS or FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <sys/wait.h>

#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "flotilla/allocation.hpp"
#include "flotilla/collision.hpp"
#include "flotilla/hydro.hpp"
#include "flotilla/metrics.hpp"
#include "flotilla/scenario.hpp"
#include "flotilla/sim.hpp"
#include "test_util.hpp"

namespace flotilla {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

const fs::path kSource = FLOTILLA_SOURCE_DIR;
const std::string kCli = FLOTILLA_CLI;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string Format(const char* fmt, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), fmt, args...);
  return buf;
}

// 1. Allocation exactness and minimum norm.
Outcome AllocationExactness() {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> count(2, 25);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  double worst_residual = 0.0, worst_norm_gap = 0.0;
  int oracle_cases = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = count(rng);
    const auto cfg =
        LatticeConfiguration::Build(testing::RandomCells(rng, n, 6, 6));
    const auto p = cfg.Structural();
    const Wrench w{unit(rng), 0.1 * unit(rng)};
    const auto f = ForceAllocator(p).Allocate(w);
    double s0 = 0.0, s1 = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      s0 += p(0, i) * f[i];
      s1 += p(1, i) * f[i];
    }
    const double wn = std::hypot(w.surge_force, w.yaw_torque);
    worst_residual = std::max(
        worst_residual,
        std::hypot(s0 - w.surge_force, s1 - w.yaw_torque) / (1.0 + wn));
    if (n <= 6) {
      Eigen::MatrixXd dense(2, n);
      for (int i = 0; i < n; ++i) {
        dense(0, i) = p(0, static_cast<std::size_t>(i));
        dense(1, i) = p(1, static_cast<std::size_t>(i));
      }
      const Eigen::VectorXd oracle =
          dense.completeOrthogonalDecomposition().solve(
              Eigen::Vector2d(w.surge_force, w.yaw_torque));
      double gap = 0.0;
      for (int i = 0; i < n; ++i) {
        gap = std::max(gap, std::abs(f[static_cast<std::size_t>(i)] - oracle(i)));
      }
      worst_norm_gap = std::max(worst_norm_gap, gap / (1.0 + oracle.norm()));
      ++oracle_cases;
    }
  }
  return {worst_residual <= 1e-9 && worst_norm_gap <= 1e-9,
          Format("1000 configs, max relative residual %.2e, max gap to the "
                 "dense minimum-norm oracle %.2e over %d cases",
                 worst_residual, worst_norm_gap, oracle_cases)};
}

// 2. Equal forces within a column, bitwise.
Outcome ColumnEquality() {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> count(3, 16);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  int cases = 0, pairs = 0, mismatches = 0;
  while (cases < 1000) {
    const auto cfg = LatticeConfiguration::Build(
        testing::RandomCells(rng, count(rng), 4, 5));
    std::map<int, std::vector<std::size_t>> columns;
    for (std::size_t i = 0; i < cfg.size(); ++i) {
      columns[cfg.cell(i).col].push_back(i);
    }
    if (columns.size() == cfg.size()) continue;
    ++cases;
    const Wrench w{unit(rng), 0.1 * unit(rng)};
    const auto f = AllocateForces(cfg.Structural(), w);
    for (const auto& [col, ids] : columns) {
      for (std::size_t k = 1; k < ids.size(); ++k) {
        ++pairs;
        mismatches += std::bit_cast<std::uint64_t>(f[ids[k]]) !=
                      std::bit_cast<std::uint64_t>(f[ids[0]]);
      }
    }
  }
  return {mismatches == 0,
          Format("%d configurations, %d same-column pairs, %d bitwise "
                 "mismatches",
                 cases, pairs, mismatches)};
}

// 3. Largest safe wake gain.
Outcome GammaMax() {
  const TailShape shape;
  std::string study;
  std::vector<double> values;
  for (double res : {0.04, 0.02, 0.01, 0.005}) {
    GammaSearchOptions opt;
    opt.resolution = res;
    const auto r = MaxSafeGamma(shape, opt);
    values.push_back(r.gamma_max);
    study += Format(" %.3g:%.4f", res, r.gamma_max);
  }
  const double at_default = values[2];
  const bool converged = std::abs(values[3] - values[2]) <= 0.01;
  const bool in_band = std::abs(at_default - 1.9) <= 0.1;
  return {converged && in_band,
          Format("gamma_max %.4f at 0.01 rad (target 1.9 +/- 0.1), %s; "
                 "resolution study%s",
                 at_default, converged ? "converged" : "not converged",
                 study.c_str())};
}

json RandomClosedLoop(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> count(2, 16);
  std::uniform_real_distribution<double> vel(-0.1, 0.1);
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  std::uniform_real_distribution<double> when(15.0, 120.0);
  const auto cells = testing::RandomCells(rng, count(rng), 4, 4);
  json jc = json::array();
  for (const auto& c : cells) jc.push_back({c.col, c.row});
  const double t1 = when(rng), t2 = when(rng);
  return {{"name", "acceptance_closed_loop"},
          {"configuration", {{"cells", jc}}},
          {"mode", "combined"},
          {"initial_state", {{"yaw", ang(rng)}}},
          {"targets",
           {{"velocity", {{0.0, vel(rng)}, {t1, vel(rng)}}},
            {"yaw", {{0.0, ang(rng)}, {t2, ang(rng)}}}}},
          {"duration_s", 150.0},
          {"dt_s", 0.015},
          {"log_every", 100},
          {"certificate", {{"samples_per_cycle", 720}}}};
}

// 4. No unintended undocking in closed loop.
Outcome ClosedLoopCertificates() {
  std::mt19937_64 rng(4);
  std::vector<json> specs;
  for (int i = 0; i < 1000; ++i) specs.push_back(RandomClosedLoop(rng));
  const int n = static_cast<int>(specs.size());
  std::vector<std::size_t> cycles(specs.size()), failed(specs.size()),
      collided(specs.size()), saturated(specs.size());
  std::vector<double> clearance(specs.size());
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    const auto sc = ParseScenario(specs[k]);
    const auto r = RunScenario(sc, static_cast<std::uint64_t>(i));
    cycles[k] = r.certificates.cycles;
    failed[k] = r.certificates.failed_cycles;
    collided[k] = r.certificates.collision_cycles;
    clearance[k] = r.certificates.min_clearance;
    saturated[k] = r.saturated_module_cycles;
  }
  std::size_t total = 0, fails = 0, hits = 0, sat = 0;
  for (std::size_t k = 0; k < specs.size(); ++k) {
    total += cycles[k];
    fails += failed[k];
    hits += collided[k];
    sat += saturated[k];
  }
  const double min_clear = *std::min_element(clearance.begin(), clearance.end());
  return {fails == 0 && hits == 0 && total == 100000,
          Format("1000 runs, %zu certified cycles, %zu failures, %zu sampled "
                 "intersections, min clearance %.4f m, %zu saturated "
                 "module-cycles",
                 total, fails, hits, min_clear, sat)};
}

// 5. Front-back collision space topology.
Outcome CollisionTopology() {
  const TailShape s;
  const auto space = ComputeCollisionSpace(FrontBackOffset(s), s, 0.02);
  const bool facing = space.Query(0.0, kPi);
  const bool clear00 = !space.Query(0.0, 0.0);
  const bool clear_pp = !space.Query(kPi, kPi);
  const int comps = space.ComponentCount();
  return {facing && clear00 && clear_pp && comps == 1,
          Format("grid %d, %zu colliding cells, %d component(s), (0,pi) %s, "
                 "(0,0) %s, (pi,pi) %s",
                 space.size(), space.CollidingCount(), comps,
                 facing ? "collides" : "clear", clear00 ? "clear" : "collides",
                 clear_pp ? "clear" : "collides")};
}

std::pair<std::vector<double>, std::vector<double>> DecaySeries(
    double c, double m, double v0, double t_end, double noise,
    std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> t, v;
  for (int i = 0; i < 200; ++i) {
    t.push_back(t_end * i / 199.0);
    v.push_back(v0 / (1.0 + c * v0 / m * t.back()) *
                (1.0 + noise * gauss(rng)));
  }
  return {t, v};
}

// 6. Drag-fit recovery on every table row.
Outcome DragFits() {
  double worst_clean = 0.0, worst_noisy = 0.0;
  const DragTable table = DragTable::Default();
  for (const auto& e : table.entries()) {
    struct Case {
      double c, m, v0;
    };
    for (const Case k : {Case{e.c_l, e.mass, 0.1}, Case{e.c_r, e.inertia, 1.0}}) {
      const double t_end = 10.0 * k.m / (k.c * k.v0);
      auto [t, v] = DecaySeries(k.c, k.m, k.v0, t_end, 0.0, 0);
      worst_clean = std::max(
          worst_clean, std::abs(FitDecay(t, v, k.m).coefficient / k.c - 1.0));
      std::vector<double> fits;
      for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        auto [tn, vn] = DecaySeries(k.c, k.m, k.v0, t_end, 0.01, seed);
        fits.push_back(FitDecay(tn, vn, k.m).coefficient);
      }
      std::sort(fits.begin(), fits.end());
      const double median = 0.5 * (fits[49] + fits[50]);
      worst_noisy = std::max(worst_noisy, std::abs(median / k.c - 1.0));
    }
  }
  return {worst_clean <= 0.01 && worst_noisy <= 0.05,
          Format("10 coefficients (C_L and C_R, N = 1..5): worst noiseless "
                 "error %.2e, worst median error with 1%% noise %.2e",
                 worst_clean, worst_noisy)};
}

json FiveBoatVelocity(double margin) {
  json j = ReadJsonFile(kSource / "scenarios/five_boat_velocity.json");
  j["duration_s"] = 90;
  j["log_every"] = 1;
  j["thrust_model"] = {{"calibration_margin", margin}};
  return j;
}

// 7. Velocity step tracking across the calibration range.
Outcome VelocityTracking() {
  bool pass = true;
  std::string detail;
  for (double margin :
       {kCalibrationMarginLow, kDefaultCalibrationMargin, kCalibrationMarginHigh}) {
    const auto sc = ParseScenario(FiveBoatVelocity(margin));
    const auto r = RunScenario(sc);
    std::vector<double> t, v;
    double ss = 0.0;
    for (const auto& row : r.series) {
      t.push_back(row.t);
      v.push_back(row.state.v_y);
      if (row.t >= 60.0) ss = std::max(ss, std::abs(0.06 - row.state.v_y));
    }
    const auto m = ComputeStepMetrics(t, v, 0.0, 0.06, false);
    const bool ok = m.rise_time && *m.rise_time >= 2.0 &&
                    *m.rise_time <= 12.0 && ss <= 0.005;
    pass = pass && ok;
    detail += Format("%sk_f %.5f (margin %.1f): rise %.2f s, ss error %.2e m/s",
                     detail.empty() ? "" : "; ", sc.thrust.k_f, margin,
                     m.rise_time.value_or(-1.0), ss);
  }
  return {pass, detail};
}

// 8. Yaw step tracking for 2..5 boat rows.
Outcome YawTracking() {
  bool converged = true;
  std::vector<double> rises;
  std::string detail;
  for (int n = 2; n <= 5; ++n) {
    json j = ReadJsonFile(kSource / "scenarios/five_boat_yaw.json");
    json cells = json::array();
    for (int i = 0; i < n; ++i) cells.push_back({i, 0});
    j["configuration"]["cells"] = cells;
    j["duration_s"] = 30;
    j["log_every"] = 1;
    const auto sc = ParseScenario(j);
    const auto r = RunScenario(sc);
    std::vector<double> t, yaw;
    for (const auto& row : r.series) {
      t.push_back(row.t);
      yaw.push_back(row.state.yaw);
    }
    const auto m = ComputeStepMetrics(t, yaw, 0.0, kPi / 2, true);
    converged = converged && std::abs(m.final_error) <= 0.05;
    rises.push_back(m.rise_time.value_or(std::nan("")));
    detail += Format("%sN=%d rise %.2f s |e(30 s)| %.3f rad",
                     detail.empty() ? "" : "; ", n, rises.back(),
                     std::abs(m.final_error));
  }
  bool monotone = true;
  for (std::size_t k = 1; k < rises.size(); ++k) {
    monotone = monotone && rises[k] > rises[k - 1];
  }
  detail += Format("; rise %s, final error %s", monotone ? "monotone" : "not monotone",
                   converged ? "within 0.05 rad" : "above 0.05 rad");
  return {converged && monotone, detail};
}

const std::vector<std::string> kBundled = {
    "five_boat_velocity.json", "five_boat_yaw.json", "l_config_combined.json",
    "gamma_override_failure.json"};

// 9. Pose equivariance and step-size refinement.
Outcome SimInvariants() {
  double worst_equiv = 0.0, worst_dt = 0.0;
  for (const auto& name : kBundled) {
    auto sc = LoadScenario(kSource / "scenarios" / name);
    sc.certify = false;
    const auto base = RunScenario(sc, 5);

    auto moved_sc = sc;
    const double shift = 0.9;
    const Vec2 d{1.3, -0.4};
    moved_sc.initial.x += d.x;
    moved_sc.initial.y += d.y;
    moved_sc.initial.yaw = WrapAngle(sc.initial.yaw + shift);
    std::vector<std::pair<double, double>> steps;
    for (auto [t, v] : sc.yaw.steps()) steps.push_back({t, v + shift});
    moved_sc.yaw = TargetSchedule(steps);
    const auto moved = RunScenario(moved_sc, 5);
    const Vec2 p0{sc.initial.x, sc.initial.y};
    for (std::size_t i = 0; i < base.series.size(); ++i) {
      const auto& a = base.series[i].state;
      const auto& b = moved.series[i].state;
      const Vec2 expect = Rotate(Vec2{a.x, a.y} - p0, shift) + p0 + d;
      worst_equiv = std::max(
          {worst_equiv, std::abs(b.v_y - a.v_y), std::abs(b.v_x - a.v_x),
           std::abs(b.omega - a.omega),
           std::abs(WrapAngle(b.yaw - a.yaw - shift)),
           (Vec2{b.x, b.y} - expect).norm()});
    }

    auto fine_sc = sc;
    fine_sc.dt /= 2.0;
    fine_sc.log_every *= 2;
    const auto fine = RunScenario(fine_sc, 5);
    for (std::size_t i = 0; i < base.series.size(); ++i) {
      const auto& a = base.series[i].state;
      const auto& b = fine.series[i].state;
      worst_dt = std::max({worst_dt, std::abs(b.v_y - a.v_y),
                           std::abs(b.v_x - a.v_x), std::abs(b.omega - a.omega),
                           std::abs(WrapAngle(b.yaw - a.yaw)),
                           std::hypot(b.x - a.x, b.y - a.y)});
    }
  }
  return {worst_equiv <= 1e-8 && worst_dt <= 1e-5,
          Format("%zu scenarios: max equivariance deviation %.2e (limit "
                 "1e-8), max dt/2 deviation %.2e (limit 1e-5)",
                 kBundled.size(), worst_equiv, worst_dt)};
}

int RunCli(const std::string& args) {
  const std::string cmd = "'" + kCli + "' " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// 10. Byte-identical artifacts for a fixed seed.
Outcome Determinism() {
  const fs::path root = fs::temp_directory_path() / "flotilla_determinism";
  fs::remove_all(root);
  int files = 0, differing = 0, code_mismatch = 0;
  for (const auto& name : kBundled) {
    std::vector<int> codes;
    for (const char* run : {"a", "b"}) {
      codes.push_back(RunCli("run --seed 7 --scenario '" +
                             (kSource / "scenarios" / name).string() +
                             "' --out '" + (root / name / run).string() + "'"));
    }
    code_mismatch += codes[0] != codes[1];
    for (const char* f : {"series.csv", "metrics.json", "certificate.json"}) {
      ++files;
      const auto a = root / name / "a" / f;
      const auto b = root / name / "b" / f;
      differing += !fs::exists(a) || Slurp(a) != Slurp(b);
    }
  }
  fs::remove_all(root);
  return {differing == 0 && code_mismatch == 0,
          Format("%zu scenarios run twice with seed 7: %d of %d artifacts "
                 "differ, %d exit code mismatches",
                 kBundled.size(), differing, files, code_mismatch)};
}

}  // namespace
}  // namespace flotilla

int main() {
  using Clock = std::chrono::steady_clock;
  struct Criterion {
    const char* name;
    double budget_s;  // 0: no runtime bound
    std::function<flotilla::Outcome()> check;
  };
  const Criterion criteria[] = {
      {"allocation exactness", 10.0, flotilla::AllocationExactness},
      {"same-column equal forces", 0.0, flotilla::ColumnEquality},
      {"gamma_max reproduction", 60.0, flotilla::GammaMax},
      {"closed-loop certificate", 600.0, flotilla::ClosedLoopCertificates},
      {"collision-space topology", 0.0, flotilla::CollisionTopology},
      {"drag-fit recovery", 0.0, flotilla::DragFits},
      {"velocity tracking", 0.0, flotilla::VelocityTracking},
      {"yaw tracking", 0.0, flotilla::YawTracking},
      {"sim invariants", 0.0, flotilla::SimInvariants},
      {"determinism", 0.0, flotilla::Determinism},
  };
  int failures = 0, index = 0;
  for (const auto& c : criteria) {
    ++index;
    const auto start = Clock::now();
    flotilla::Outcome out;
    try {
      out = c.check();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(Clock::now() - start).count();
    if (c.budget_s > 0.0 && secs > c.budget_s) {
      out.pass = false;
      out.detail += flotilla::Format("; over the %.0f s budget", c.budget_s);
    }
    failures += !out.pass;
    std::printf("%s %d %s: %s [%.1f s]\n", out.pass ? "PASS" : "FAIL", index,
                c.name, out.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %d criteria passed\n", index - failures, index);
  return failures == 0 ? 0 : 1;
}
