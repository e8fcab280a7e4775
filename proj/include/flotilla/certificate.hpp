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

// Runtime certificate that one cycle of phase-locked commands cannot bring
// any pair of edge-adjacent tails into contact.

#ifndef FLOTILLA_CERTIFICATE_HPP_
#define FLOTILLA_CERTIFICATE_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "flotilla/collision.hpp"
#include "flotilla/lattice.hpp"
#include "flotilla/waveform.hpp"

namespace flotilla {

inline constexpr double kDefaultGammaLimit = 1.9;

struct CertificateOptions {
  int samples_per_cycle = 720;  // must be >= 720
  double gamma_limit = kDefaultGammaLimit;
  TailShape shape;
  int boundary_samples = kDefaultBoundarySamples;
  double clearance_horizon = 0.01;  // m, clearances are capped here

  void Validate() const;
};

struct Certificate {
  bool ok = true;
  // Violated phase-lock or wake-gain assumptions, one message each.
  std::vector<std::string> violations;
  // Some sampled instant put two neighbor outlines in contact.
  bool collision = false;
  double min_clearance = 0.0;  // m, capped at the horizon
  std::optional<std::size_t> worst_a;
  std::optional<std::size_t> worst_b;
  bool worst_vertical = false;
  double worst_time = 0.0;  // s into the cycle
};

// Samples t = j T / n for the n = samples_per_cycle instants of one cycle.
// Instants t and T - t give identical tail angles, so only j <= n / 2 are
// evaluated. Horizontal and vertical neighbor pairs are checked; diagonal
// pairs are not. OpenMP over time samples with a deterministic merge.
Certificate CertifyNoUndock(const LatticeConfiguration& config,
                            std::span<const WaveformCommand> commands,
                            const CertificateOptions& options = {});
// Single-threaded reference using the exhaustive pair test.
Certificate CertifyNoUndockSerial(const LatticeConfiguration& config,
                                  std::span<const WaveformCommand> commands,
                                  const CertificateOptions& options = {});

// Assumption checks alone: shared omega, valid amplitudes, equal
// centerlines and rear/front amplitude ratio <= gamma_limit for vertical
// neighbors.
std::vector<std::string> CheckPreconditions(
    const LatticeConfiguration& config,
    std::span<const WaveformCommand> commands, double gamma_limit);

// Running summary over many cycles.
struct CertificateLog {
  std::size_t cycles = 0;
  std::size_t failed_cycles = 0;
  std::size_t collision_cycles = 0;
  std::vector<std::string> violations;  // first few, prefixed by cycle
  double min_clearance = 0.0;
  std::optional<std::size_t> worst_cycle;
  Certificate worst;

  void Add(const Certificate& c, std::size_t cycle);
  bool ok() const { return failed_cycles == 0; }
  nlohmann::json ToJson(const LatticeConfiguration& config,
                        const CertificateOptions& options) const;
};

nlohmann::json ToJson(const Certificate& c, const LatticeConfiguration& config);

}  // namespace flotilla

#endif  // FLOTILLA_CERTIFICATE_HPP_
