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

// Scenario files: configuration, controller, targets, plant and run
// settings for one closed-loop simulation.

#ifndef FLOTILLA_SCENARIO_HPP_
#define FLOTILLA_SCENARIO_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "flotilla/body.hpp"
#include "flotilla/certificate.hpp"
#include "flotilla/control.hpp"
#include "flotilla/hydro.hpp"
#include "flotilla/lattice.hpp"
#include "flotilla/waveform.hpp"

namespace flotilla {

// Piecewise-constant target: value of the last step whose time is <= t.
// The first step must be at t = 0.
class TargetSchedule {
 public:
  TargetSchedule() = default;
  explicit TargetSchedule(std::vector<std::pair<double, double>> steps);

  double At(double t) const;
  std::span<const std::pair<double, double>> steps() const { return steps_; }
  // Time and value of the last step.
  std::pair<double, double> LastStep() const { return steps_.back(); }
  bool empty() const { return steps_.empty(); }

 private:
  std::vector<std::pair<double, double>> steps_;
};

struct ObservationNoise {
  double velocity_std = 0.0;  // m/s, on the observed surge velocity
  double yaw_std = 0.0;       // rad, on the observed yaw
  double omega_std = 0.0;     // rad/s, on the observed yaw rate
};

struct Scenario {
  std::string name;
  ConfigurationFile configuration;
  ControlMode mode = ControlMode::kCombined;
  ControllerGains gains;
  TargetSchedule velocity;  // m/s
  TargetSchedule yaw;       // rad
  BodyState initial;
  double duration = 0.0;        // s
  double cycle_period = kDefaultCyclePeriod;  // s
  double dt = kDefaultCyclePeriod / 150.0;   // s
  ThrustModel thrust;
  PhysicalParams plant;
  PhysicalParams controller_model;  // what the allocator assumes
  double c_sway = 0.0;              // kg/m
  double v_max = kDefaultMaxVelocity;
  bool thrust_ripple = false;
  ObservationNoise noise;
  bool certify = true;
  CertificateOptions certificate;
  int log_every = 1;  // integration steps between logged rows

  // Canonical JSON (configuration inlined), the basis of the scenario hash.
  nlohmann::json canonical;

  double omega() const { return kTwoPi / cycle_period; }
  int steps_per_cycle() const;
  std::int64_t total_steps() const;
};

// Parses and validates a scenario. Relative file references are resolved
// against `base_dir`. Throws ValidationError listing every problem found.
Scenario ParseScenario(const nlohmann::json& j,
                       const std::filesystem::path& base_dir = ".");
Scenario LoadScenario(const std::filesystem::path& path);

// 64-bit FNV-1a over the canonical JSON text, as 16 hex digits.
std::string ScenarioHash(const Scenario& s);

nlohmann::json ReadJsonFile(const std::filesystem::path& path);

}  // namespace flotilla

#endif  // FLOTILLA_SCENARIO_HPP_
