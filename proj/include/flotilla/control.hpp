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

// Cycle-synchronous outer loops: velocity feedforward with an integrated PD
// correction, and a PD loop on yaw acceleration.

#ifndef FLOTILLA_CONTROL_HPP_
#define FLOTILLA_CONTROL_HPP_

#include <optional>
#include <string>
#include <vector>

#include "flotilla/allocation.hpp"
#include "flotilla/body.hpp"
#include "flotilla/lattice.hpp"
#include "flotilla/waveform.hpp"

namespace flotilla {

struct ControllerGains {
  double kp_v = 0.6;      // 1/s
  double kd_v = 0.1;      // dimensionless
  double kp_theta = 1.0;  // 1/s^2
  double kd_theta = 0.2;  // 1/s

  // Throws ParameterError for negative or non-finite gains.
  void Validate() const;
};

struct ControllerState {
  double correction = 0.0;  // m/s, integrated velocity correction
  std::optional<double> prev_velocity_error;
  std::optional<double> prev_yaw_error;
  double last_update_time = 0.0;

  void Reset() { *this = ControllerState{}; }
};

enum class ControlMode { kVelocityOnly, kYawOnly, kCombined };

std::string ToString(ControlMode mode);
// Accepts "velocity", "yaw" and "combined".
ControlMode ParseControlMode(const std::string& name);

inline constexpr double kDefaultMaxVelocity = 0.15;  // m/s

// v_c = v_d + sum over cycles of (Kpv e + Kdv de/dt) dt with a zero
// derivative on the first update. The correction is clamped so that
// |v_c| <= v_max.
double VelocityCommand(ControllerState& state, const ControllerGains& gains,
                       double v_d, double v_obs, double dt,
                       double v_max = kDefaultMaxVelocity);

// alpha = Kp e + Kd de/dt with e = wrap(theta_d - theta) in (-pi, pi] and a
// zero derivative on the first update.
double YawAcceleration(ControllerState& state, const ControllerGains& gains,
                       double theta_d, double theta, double dt);

struct Targets {
  double velocity = 0.0;  // m/s
  double yaw = 0.0;       // rad
};

struct CycleOutput {
  double v_c = 0.0;
  double alpha = 0.0;
  Wrench wrench;
  std::vector<double> forces;
  CommandSet commands;
};

// Runs once per cycle: velocity command, required wrench, force allocation
// and waveform commands. In velocity-only mode alpha and the yaw-drag term
// are zero; in yaw-only mode v_c is zero.
class CycleController {
 public:
  CycleController(const LatticeConfiguration& config, PhysicalParams model,
                  ThrustModel thrust, ControllerGains gains, ControlMode mode,
                  double omega = kDefaultOmega,
                  double v_max = kDefaultMaxVelocity);

  CycleOutput Update(const Targets& targets, const BodyState& observed,
                     double time);

  const ControllerState& state() const { return state_; }
  double period() const { return kTwoPi / omega_; }
  ControlMode mode() const { return mode_; }

 private:
  ForceAllocator allocator_;
  std::vector<int> ranks_;
  PhysicalParams model_;
  ThrustModel thrust_;
  ControllerGains gains_;
  ControlMode mode_;
  double omega_;
  double v_max_;
  ControllerState state_;
};

}  // namespace flotilla

#endif  // FLOTILLA_CONTROL_HPP_
