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

// Planar rigid-body simulation under cycle-averaged module thrust with
// quadratic drag, closed through the cycle controller.

#ifndef FLOTILLA_SIM_HPP_
#define FLOTILLA_SIM_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "flotilla/body.hpp"
#include "flotilla/certificate.hpp"
#include "flotilla/lattice.hpp"
#include "flotilla/scenario.hpp"
#include "flotilla/waveform.hpp"

namespace flotilla {

struct SimParams {
  PhysicalParams physical;
  double c_sway = 0.0;  // kg/m
  double cycle_period = kDefaultCyclePeriod;
  // Scales thrust by 1 - cos(2 omega t), which keeps the cycle average.
  bool thrust_ripple = false;

  void Validate() const;
};

// One explicit RK4 step of
//   m dv_y/dt   = sum f_i - C_L |v_y| v_y
//   m dv_x/dt   = -C_sway |v_x| v_x
//   I dOmega/dt = sum f_i x_i - C_R |Omega| Omega
// with the body velocity rotated into the world frame for position. `t` is
// the time at the start of the step (only used for ripple). Yaw is wrapped
// after the step.
BodyState DynamicsStep(const BodyState& state, std::span<const double> forces,
                       std::span<const ModuleGeometry> geometry,
                       const SimParams& params, double dt, double t = 0.0);

struct SeriesRow {
  double t = 0.0;
  BodyState state;
  double v_target = 0.0;
  double yaw_target = 0.0;
};

struct CycleRecord {
  double t = 0.0;
  double v_c = 0.0;
  double alpha = 0.0;
  std::vector<double> forces;  // allocated forces, N
  CommandSet commands;
  Certificate certificate;  // default (ok) when certification is off
};

struct SimulationResult {
  std::vector<SeriesRow> series;
  std::vector<CycleRecord> cycles;
  CertificateLog certificates;
  std::size_t saturated_module_cycles = 0;
};

// Runs the scenario. Observation noise draws from a generator seeded with
// `seed`, so equal seeds give identical results.
SimulationResult RunScenario(const Scenario& scenario, std::uint64_t seed = 0);

}  // namespace flotilla

#endif  // FLOTILLA_SIM_HPP_
