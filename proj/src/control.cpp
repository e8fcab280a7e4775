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

#include "flotilla/control.hpp"

#include <algorithm>
#include <cmath>

#include "flotilla/error.hpp"

namespace flotilla {

void ControllerGains::Validate() const {
  for (double g : {kp_v, kd_v, kp_theta, kd_theta}) {
    if (!(g >= 0.0) || !std::isfinite(g)) {
      throw ParameterError("controller gains must be finite and >= 0");
    }
  }
}

std::string ToString(ControlMode mode) {
  switch (mode) {
    case ControlMode::kVelocityOnly:
      return "velocity";
    case ControlMode::kYawOnly:
      return "yaw";
    case ControlMode::kCombined:
      return "combined";
  }
  return "combined";
}

ControlMode ParseControlMode(const std::string& name) {
  if (name == "velocity") return ControlMode::kVelocityOnly;
  if (name == "yaw") return ControlMode::kYawOnly;
  if (name == "combined") return ControlMode::kCombined;
  throw ParameterError("unknown control mode '" + name +
                       "' (expected velocity, yaw or combined)");
}

double VelocityCommand(ControllerState& state, const ControllerGains& gains,
                       double v_d, double v_obs, double dt, double v_max) {
  if (!(dt > 0.0)) throw ParameterError("dt must be positive");
  const double e = v_d - v_obs;
  const double de =
      state.prev_velocity_error ? (e - *state.prev_velocity_error) / dt : 0.0;
  state.prev_velocity_error = e;
  state.correction += (gains.kp_v * e + gains.kd_v * de) * dt;
  // Anti-windup: hold the correction at the value that saturates v_c.
  const double v_c = std::clamp(v_d + state.correction, -v_max, v_max);
  state.correction = v_c - v_d;
  return v_c;
}

double YawAcceleration(ControllerState& state, const ControllerGains& gains,
                       double theta_d, double theta, double dt) {
  if (!(dt > 0.0)) throw ParameterError("dt must be positive");
  const double e = WrapAngle(theta_d - theta);
  const double de =
      state.prev_yaw_error ? WrapAngle(e - *state.prev_yaw_error) / dt : 0.0;
  state.prev_yaw_error = e;
  return gains.kp_theta * e + gains.kd_theta * de;
}

CycleController::CycleController(const LatticeConfiguration& config,
                                 PhysicalParams model, ThrustModel thrust,
                                 ControllerGains gains, ControlMode mode,
                                 double omega, double v_max)
    : allocator_(config.Structural()),
      ranks_(config.RearRanks()),
      model_(model),
      thrust_(std::move(thrust)),
      gains_(gains),
      mode_(mode),
      omega_(omega),
      v_max_(v_max) {
  model_.Validate();
  thrust_.Validate();
  gains_.Validate();
  if (!(omega_ > 0.0)) throw ParameterError("omega must be positive");
  if (!(v_max_ > 0.0)) throw ParameterError("v_max must be positive");
}

CycleOutput CycleController::Update(const Targets& targets,
                                    const BodyState& observed, double time) {
  const double dt = period();
  CycleOutput out;
  if (mode_ != ControlMode::kYawOnly) {
    out.v_c = VelocityCommand(state_, gains_, targets.velocity, observed.v_y,
                              dt, v_max_);
  }
  double yaw_rate = observed.omega;
  if (mode_ != ControlMode::kVelocityOnly) {
    out.alpha = YawAcceleration(state_, gains_, targets.yaw, observed.yaw, dt);
  } else {
    yaw_rate = 0.0;
  }
  state_.last_update_time = time;
  out.wrench = RequiredWrench(out.v_c, yaw_rate, out.alpha, model_);
  out.forces = allocator_.Allocate(out.wrench);
  out.commands = ToWaveformCommands(out.forces, ranks_, thrust_, omega_);
  return out;
}

}  // namespace flotilla
