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

// Wrench -> per-module forces (minimum-norm) -> waveform commands.

#ifndef FLOTILLA_ALLOCATION_HPP_
#define FLOTILLA_ALLOCATION_HPP_

#include <span>
#include <vector>

#include "flotilla/body.hpp"
#include "flotilla/lattice.hpp"
#include "flotilla/waveform.hpp"

namespace flotilla {

struct Wrench {
  double surge_force = 0.0;  // N
  double yaw_torque = 0.0;   // N m
};

// Steady-state surge demand plus yaw demand:
//   surge = C_L |v_c| v_c,  torque = I alpha + C_R |Omega| Omega.
Wrench RequiredWrench(double v_c, double omega, double alpha,
                      const PhysicalParams& params);

// Minimum-norm solution of P f = w through the 2 x 2 Gram matrix. The
// inverse Gram is factored once per configuration. Each force is evaluated
// as c0 * P(0, i) + c1 * P(1, i), so equal columns of P give bitwise-equal
// forces.
class ForceAllocator {
 public:
  // Throws RankDeficientError if P does not have rank 2.
  explicit ForceAllocator(const StructuralMatrix& p);

  std::vector<double> Allocate(const Wrench& w) const;
  void Allocate(const Wrench& w, std::span<double> out) const;

 private:
  StructuralMatrix p_;
  double inv00_ = 0.0, inv01_ = 0.0, inv11_ = 0.0;
};

std::vector<double> AllocateForces(const StructuralMatrix& p, const Wrench& w);

struct CommandSet {
  std::vector<WaveformCommand> modules;
  std::vector<bool> saturated;

  std::size_t SaturatedCount() const;
};

// Per module: centerline 0 for f >= 0 and pi otherwise; amplitude
//   A = (A_dead + |f| / k_f) * WakeGain(rank),
// so every module runs gamma(k) times the amplitude of the module directly
// ahead of it. A zero force yields A = 0. Amplitudes above A_max are clipped
// and flagged.
CommandSet ToWaveformCommands(std::span<const double> forces,
                              std::span<const int> ranks,
                              const ThrustModel& model, double omega);

}  // namespace flotilla

#endif  // FLOTILLA_ALLOCATION_HPP_
