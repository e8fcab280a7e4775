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

#include "flotilla/allocation.hpp"

#include <algorithm>
#include <cmath>

#include "flotilla/error.hpp"

namespace flotilla {

void PhysicalParams::Validate() const {
  for (double v : {mass, inertia, c_l, c_r}) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ParameterError("physical parameters must be positive and finite");
    }
  }
}

Wrench RequiredWrench(double v_c, double omega, double alpha,
                      const PhysicalParams& params) {
  return {params.c_l * std::abs(v_c) * v_c,
          params.inertia * alpha + params.c_r * std::abs(omega) * omega};
}

ForceAllocator::ForceAllocator(const StructuralMatrix& p) : p_(p) {
  if (p_.Rank() != 2) {
    throw RankDeficientError("structural matrix must have rank 2");
  }
  double g00 = 0.0, g01 = 0.0, g11 = 0.0;
  for (std::size_t i = 0; i < p_.cols(); ++i) {
    g00 += p_(0, i) * p_(0, i);
    g01 += p_(0, i) * p_(1, i);
    g11 += p_(1, i) * p_(1, i);
  }
  const double det = g00 * g11 - g01 * g01;
  inv00_ = g11 / det;
  inv01_ = -g01 / det;
  inv11_ = g00 / det;
}

void ForceAllocator::Allocate(const Wrench& w, std::span<double> out) const {
  if (out.size() != p_.cols()) {
    throw ParameterError("force buffer length differs from module count");
  }
  const double c0 = inv00_ * w.surge_force + inv01_ * w.yaw_torque;
  const double c1 = inv01_ * w.surge_force + inv11_ * w.yaw_torque;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = c0 * p_(0, i) + c1 * p_(1, i);
  }
}

std::vector<double> ForceAllocator::Allocate(const Wrench& w) const {
  std::vector<double> f(p_.cols());
  Allocate(w, f);
  return f;
}

std::vector<double> AllocateForces(const StructuralMatrix& p, const Wrench& w) {
  return ForceAllocator(p).Allocate(w);
}

std::size_t CommandSet::SaturatedCount() const {
  return static_cast<std::size_t>(
      std::count(saturated.begin(), saturated.end(), true));
}

CommandSet ToWaveformCommands(std::span<const double> forces,
                              std::span<const int> ranks,
                              const ThrustModel& model, double omega) {
  if (forces.size() != ranks.size()) {
    throw ParameterError("forces and ranks differ in length");
  }
  CommandSet out;
  out.modules.reserve(forces.size());
  out.saturated.reserve(forces.size());
  for (std::size_t i = 0; i < forces.size(); ++i) {
    const double f = forces[i];
    WaveformCommand cmd;
    cmd.omega = omega;
    cmd.centerline = f >= 0.0 ? Centerline::kForward : Centerline::kReverse;
    bool saturated = false;
    if (f != 0.0) {
      const double nominal = model.a_dead + std::abs(f) / model.k_f;
      const double a = nominal * model.WakeGain(ranks[i]);
      saturated = a > model.a_max;
      cmd.amplitude = saturated ? model.a_max : a;
    }
    out.modules.push_back(cmd);
    out.saturated.push_back(saturated);
  }
  return out;
}

}  // namespace flotilla
