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

#include "flotilla/sim.hpp"

#include <cmath>
#include <random>

#include "flotilla/control.hpp"
#include "flotilla/error.hpp"

namespace flotilla {

namespace {

struct Derivative {
  double x, y, yaw, v_y, v_x, omega;
};

Derivative Rates(const BodyState& s, double force, double torque,
                 const SimParams& p) {
  const double c = std::cos(s.yaw);
  const double sn = std::sin(s.yaw);
  const auto& ph = p.physical;
  return {s.v_x * c - s.v_y * sn,
          s.v_x * sn + s.v_y * c,
          s.omega,
          (force - ph.c_l * std::abs(s.v_y) * s.v_y) / ph.mass,
          -p.c_sway * std::abs(s.v_x) * s.v_x / ph.mass,
          (torque - ph.c_r * std::abs(s.omega) * s.omega) / ph.inertia};
}

BodyState Advance(const BodyState& s, const Derivative& d, double h) {
  BodyState out = s;
  out.x += h * d.x;
  out.y += h * d.y;
  out.yaw += h * d.yaw;
  out.v_y += h * d.v_y;
  out.v_x += h * d.v_x;
  out.omega += h * d.omega;
  return out;
}

}  // namespace

void SimParams::Validate() const {
  physical.Validate();
  if (!(c_sway >= 0.0) || !std::isfinite(c_sway)) {
    throw ParameterError("sway drag must be finite and >= 0");
  }
  if (!(cycle_period > 0.0)) throw ParameterError("cycle period must be > 0");
}

BodyState DynamicsStep(const BodyState& state, std::span<const double> forces,
                       std::span<const ModuleGeometry> geometry,
                       const SimParams& params, double dt, double t) {
  if (!(dt > 0.0)) throw ParameterError("dt must be positive");
  if (forces.size() != geometry.size()) {
    throw ParameterError("forces and geometry differ in length");
  }
  double force = 0.0, torque = 0.0;
  for (std::size_t i = 0; i < forces.size(); ++i) {
    force += forces[i];
    torque += forces[i] * geometry[i].x_off;
  }
  const double omega = kTwoPi / params.cycle_period;
  auto scale = [&](double time) {
    return params.thrust_ripple ? 1.0 - std::cos(2.0 * omega * time) : 1.0;
  };
  auto rates = [&](const BodyState& s, double time) {
    const double k = scale(time);
    return Rates(s, k * force, k * torque, params);
  };
  const Derivative k1 = rates(state, t);
  const Derivative k2 = rates(Advance(state, k1, 0.5 * dt), t + 0.5 * dt);
  const Derivative k3 = rates(Advance(state, k2, 0.5 * dt), t + 0.5 * dt);
  const Derivative k4 = rates(Advance(state, k3, dt), t + dt);
  const Derivative sum{k1.x + 2 * k2.x + 2 * k3.x + k4.x,
                       k1.y + 2 * k2.y + 2 * k3.y + k4.y,
                       k1.yaw + 2 * k2.yaw + 2 * k3.yaw + k4.yaw,
                       k1.v_y + 2 * k2.v_y + 2 * k3.v_y + k4.v_y,
                       k1.v_x + 2 * k2.v_x + 2 * k3.v_x + k4.v_x,
                       k1.omega + 2 * k2.omega + 2 * k3.omega + k4.omega};
  BodyState out = Advance(state, sum, dt / 6.0);
  out.yaw = WrapAngle(out.yaw);
  return out;
}

SimulationResult RunScenario(const Scenario& sc, std::uint64_t seed) {
  const LatticeConfiguration& config = sc.configuration.configuration;
  SimParams params{sc.plant, sc.c_sway, sc.cycle_period, sc.thrust_ripple};
  params.Validate();
  CycleController controller(config, sc.controller_model, sc.thrust, sc.gains,
                             sc.mode, sc.omega(), sc.v_max);
  const auto geometry = config.geometry();
  const auto ranks = config.RearRanks();

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> unit(0.0, 1.0);
  auto noisy = [&](double value, double std_dev) {
    return std_dev > 0.0 ? value + std_dev * unit(rng) : value;
  };

  SimulationResult result;
  const int per_cycle = sc.steps_per_cycle();
  const std::int64_t total = sc.total_steps();
  result.series.reserve(static_cast<std::size_t>(total / sc.log_every + 2));

  BodyState state = sc.initial;
  state.yaw = WrapAngle(state.yaw);
  result.series.push_back({0.0, state, sc.velocity.At(0.0), sc.yaw.At(0.0)});
  std::vector<double> thrust(config.size(), 0.0);

  for (std::int64_t step = 0; step < total; ++step) {
    const double t = static_cast<double>(step) * sc.dt;
    if (step % per_cycle == 0) {
      BodyState observed = state;
      observed.v_y = noisy(state.v_y, sc.noise.velocity_std);
      observed.yaw = WrapAngle(noisy(state.yaw, sc.noise.yaw_std));
      observed.omega = noisy(state.omega, sc.noise.omega_std);
      const Targets targets{sc.velocity.At(t), sc.yaw.At(t)};
      CycleOutput out = controller.Update(targets, observed, t);
      CycleRecord rec;
      rec.t = t;
      rec.v_c = out.v_c;
      rec.alpha = out.alpha;
      rec.forces = std::move(out.forces);
      rec.commands = std::move(out.commands);
      if (sc.certify) {
        rec.certificate =
            CertifyNoUndock(config, rec.commands.modules, sc.certificate);
        result.certificates.Add(rec.certificate, result.cycles.size());
      }
      result.saturated_module_cycles += rec.commands.SaturatedCount();
      for (std::size_t i = 0; i < thrust.size(); ++i) {
        thrust[i] = CycleAverageThrust(sc.thrust, rec.commands.modules[i],
                                       ranks[i]);
      }
      result.cycles.push_back(std::move(rec));
    }
    state = DynamicsStep(state, thrust, geometry, params, sc.dt, t);
    if ((step + 1) % sc.log_every == 0 || step + 1 == total) {
      const double t_next = static_cast<double>(step + 1) * sc.dt;
      result.series.push_back(
          {t_next, state, sc.velocity.At(t_next), sc.yaw.At(t_next)});
    }
  }
  return result;
}

}  // namespace flotilla
