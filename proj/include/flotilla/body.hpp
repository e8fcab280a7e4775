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

// Aggregate rigid-body parameters and the planar state of a configuration.

#ifndef FLOTILLA_BODY_HPP_
#define FLOTILLA_BODY_HPP_

namespace flotilla {

// SI units throughout: kg, kg m^2, kg/m, kg m^2.
struct PhysicalParams {
  double mass = 0.0;
  double inertia = 0.0;
  double c_l = 0.0;  // surge drag, F = C_L |v| v
  double c_r = 0.0;  // yaw drag, tau = C_R |Omega| Omega

  // Throws ParameterError unless every field is positive and finite.
  void Validate() const;
};

// Pose in the world frame and twist in the body frame. The body y axis is
// the surge (forward) direction and the body x axis the sway direction.
struct BodyState {
  double x = 0.0;      // m, world
  double y = 0.0;      // m, world
  double yaw = 0.0;    // rad, (-pi, pi]
  double v_y = 0.0;    // m/s, surge
  double v_x = 0.0;    // m/s, sway
  double omega = 0.0;  // rad/s

  friend bool operator==(const BodyState&, const BodyState&) = default;
};

}  // namespace flotilla

#endif  // FLOTILLA_BODY_HPP_
