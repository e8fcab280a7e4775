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

#include "flotilla/artifacts.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "flotilla/error.hpp"
#include "flotilla/metrics.hpp"

namespace flotilla {

namespace {

void Put(std::ostream& os, double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  os << buf;
}

nlohmann::json StepJson(const StepMetrics& m) {
  nlohmann::json j{{"step_time_s", m.step_time},
                   {"initial", m.initial},
                   {"target", m.target},
                   {"rms_error", m.rms_error},
                   {"rms_window_start_s", m.rms_window_start},
                   {"final_error", m.final_error}};
  j["rise_time_s"] = m.rise_time ? nlohmann::json(*m.rise_time) : nullptr;
  return j;
}

}  // namespace

void WriteSeriesCsv(std::ostream& os, const Scenario& scenario,
                    const SimulationResult& result) {
  const std::size_t n = scenario.configuration.configuration.size();
  os << "t,x,y,yaw,v_y,v_x,omega,v_target,yaw_target,v_c,alpha_cmd";
  for (std::size_t i = 0; i < n; ++i) {
    os << ",a_" << i << ",centerline_" << i << ",saturated_" << i;
  }
  os << '\n';
  const double period = scenario.cycle_period;
  for (const auto& row : result.series) {
    // The cycle whose commands drive the step ending at row.t.
    std::size_t c = 0;
    if (!result.cycles.empty()) {
      const double k = std::ceil(row.t / period - 1e-9) - 1.0;
      c = static_cast<std::size_t>(std::max(0.0, k));
      c = std::min(c, result.cycles.size() - 1);
    }
    const auto& s = row.state;
    for (double v : {row.t, s.x, s.y, s.yaw, s.v_y, s.v_x, s.omega,
                     row.v_target, row.yaw_target}) {
      Put(os, v);
      os << ',';
    }
    if (result.cycles.empty()) {
      os << "0,0";
      for (std::size_t i = 0; i < n; ++i) os << ",0,0,0";
    } else {
      const auto& cyc = result.cycles[c];
      Put(os, cyc.v_c);
      os << ',';
      Put(os, cyc.alpha);
      for (std::size_t i = 0; i < n; ++i) {
        os << ',';
        Put(os, cyc.commands.modules[i].amplitude);
        os << ','
           << (cyc.commands.modules[i].centerline == Centerline::kReverse ? 1 : 0)
           << ',' << (cyc.commands.saturated[i] ? 1 : 0);
      }
    }
    os << '\n';
  }
}

nlohmann::json MetricsJson(const Scenario& scenario,
                           const SimulationResult& result, std::uint64_t seed) {
  std::vector<double> t, v, yaw;
  t.reserve(result.series.size());
  for (const auto& row : result.series) {
    t.push_back(row.t);
    v.push_back(row.state.v_y);
    yaw.push_back(row.state.yaw);
  }
  nlohmann::json j;
  j["scenario"] = scenario.name;
  j["scenario_hash"] = ScenarioHash(scenario);
  j["seed"] = seed;
  j["mode"] = ToString(scenario.mode);
  j["rms_window"] = "samples after the 0.9 crossing of the last step";
  if (scenario.mode != ControlMode::kYawOnly) {
    const auto [ts, target] = scenario.velocity.LastStep();
    j["velocity"] = StepJson(ComputeStepMetrics(t, v, ts, target, false));
  }
  if (scenario.mode != ControlMode::kVelocityOnly) {
    const auto [ts, target] = scenario.yaw.LastStep();
    j["yaw"] = StepJson(ComputeStepMetrics(t, yaw, ts, target, true));
  }
  const std::size_t n = scenario.configuration.configuration.size();
  j["cycles"] = result.cycles.size();
  j["saturated_module_cycles"] = result.saturated_module_cycles;
  j["saturation_fraction"] =
      result.cycles.empty()
          ? 0.0
          : static_cast<double>(result.saturated_module_cycles) /
                static_cast<double>(result.cycles.size() * n);
  j["certificate_ok"] = result.certificates.ok();
  j["certificate_checked"] = scenario.certify;
  j["min_clearance_m"] = result.certificates.min_clearance;
  const auto& f = result.series.back().state;
  j["final_state"] = {{"t", result.series.back().t},
                      {"x", f.x},
                      {"y", f.y},
                      {"yaw", f.yaw},
                      {"v_y", f.v_y},
                      {"v_x", f.v_x},
                      {"omega", f.omega}};
  return j;
}

nlohmann::json CertificateJson(const Scenario& scenario,
                               const SimulationResult& result) {
  nlohmann::json j = result.certificates.ToJson(
      scenario.configuration.configuration, scenario.certificate);
  j["enabled"] = scenario.certify;
  j["scenario_hash"] = ScenarioHash(scenario);
  return j;
}

void WriteJsonFile(const std::filesystem::path& path, const nlohmann::json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

void WriteRunArtifacts(const std::filesystem::path& dir,
                       const Scenario& scenario, const SimulationResult& result,
                       std::uint64_t seed) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "series.csv", std::ios::binary);
    if (!out) throw std::runtime_error("cannot write series.csv");
    WriteSeriesCsv(out, scenario, result);
  }
  WriteJsonFile(dir / "metrics.json", MetricsJson(scenario, result, seed));
  WriteJsonFile(dir / "certificate.json", CertificateJson(scenario, result));
}

}  // namespace flotilla
