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

#include "flotilla/certificate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "flotilla/error.hpp"

namespace flotilla {

namespace {

constexpr std::size_t kMaxLoggedViolations = 20;

std::string CellName(const LatticeConfiguration& config, std::size_t id) {
  const GridCell c = config.cell(id);
  return "(" + std::to_string(c.col) + "," + std::to_string(c.row) + ")";
}

nlohmann::json CellJson(const LatticeConfiguration& config, std::size_t id) {
  const GridCell c = config.cell(id);
  return nlohmann::json::array({c.col, c.row});
}

struct SampleResult {
  bool collision = false;
  double clearance = std::numeric_limits<double>::infinity();
  std::size_t pair = 0;
};

template <bool kParallel>
Certificate Certify(const LatticeConfiguration& config,
                    std::span<const WaveformCommand> commands,
                    const CertificateOptions& options) {
  options.Validate();
  Certificate cert;
  cert.violations =
      CheckPreconditions(config, commands, options.gamma_limit);
  cert.min_clearance = options.clearance_horizon;

  const PairChecker checker(options.shape, options.boundary_samples);
  const auto pairs = config.NeighborPairs();
  const auto offsets = config.Offsets();
  const std::size_t n_mod = config.size();
  if (pairs.empty() || commands.size() != n_mod) {
    cert.ok = cert.violations.empty();
    return cert;
  }
  const double omega = commands.front().omega;
  const double period = kTwoPi / omega;
  const int n = options.samples_per_cycle;
  const int unique = n / 2 + 1;

  std::vector<SampleResult> results(static_cast<std::size_t>(unique));
  auto evaluate = [&](int j) {
    const double t = period * j / n;
    std::vector<double> phi(n_mod);
    for (std::size_t i = 0; i < n_mod; ++i) phi[i] = TailAngle(commands[i], t);
    SampleResult r;
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      const auto& pr = pairs[p];
      double c;
      if constexpr (kParallel) {
        c = checker.Clearance(offsets[pr.a], phi[pr.a], offsets[pr.b],
                              phi[pr.b], options.clearance_horizon);
      } else {
        const bool hit = checker.CollidesReference(
            offsets[pr.a], phi[pr.a], offsets[pr.b], phi[pr.b]);
        c = checker.Clearance(offsets[pr.a], phi[pr.a], offsets[pr.b],
                              phi[pr.b], options.clearance_horizon);
        if (hit != (c < -kInsideTolerance)) {
          throw std::logic_error("clearance and exhaustive test disagree");
        }
      }
      if (c < r.clearance) {
        r.clearance = c;
        r.pair = p;
      }
    }
    r.collision = r.clearance < -kInsideTolerance;
    results[static_cast<std::size_t>(j)] = r;
  };
  if constexpr (kParallel) {
#pragma omp parallel for schedule(static)
    for (int j = 0; j < unique; ++j) evaluate(j);
  } else {
    for (int j = 0; j < unique; ++j) evaluate(j);
  }

  // Earliest sample wins ties, independent of thread scheduling.
  std::optional<int> worst;
  for (int j = 0; j < unique; ++j) {
    const auto& r = results[static_cast<std::size_t>(j)];
    if (!worst || r.clearance < results[static_cast<std::size_t>(*worst)].clearance) {
      worst = j;
    }
  }
  const auto& w = results[static_cast<std::size_t>(*worst)];
  cert.collision = w.collision;
  cert.min_clearance = std::min(w.clearance, options.clearance_horizon);
  if (w.clearance < options.clearance_horizon) {
    cert.worst_a = pairs[w.pair].a;
    cert.worst_b = pairs[w.pair].b;
    cert.worst_vertical = pairs[w.pair].vertical;
    cert.worst_time = period * *worst / n;
  }
  cert.ok = cert.violations.empty() && !cert.collision;
  return cert;
}

}  // namespace

void CertificateOptions::Validate() const {
  if (samples_per_cycle < 720) {
    throw ParameterError("samples_per_cycle must be >= 720");
  }
  if (!(gamma_limit >= 1.0) || !std::isfinite(gamma_limit)) {
    throw ParameterError("gamma_limit must be finite and >= 1");
  }
  if (!(clearance_horizon > 0.0)) {
    throw ParameterError("clearance horizon must be positive");
  }
  shape.Validate();
}

std::vector<std::string> CheckPreconditions(
    const LatticeConfiguration& config,
    std::span<const WaveformCommand> commands, double gamma_limit) {
  std::vector<std::string> issues;
  if (commands.size() != config.size()) {
    issues.push_back("expected " + std::to_string(config.size()) +
                     " commands, got " + std::to_string(commands.size()));
    return issues;
  }
  const double omega = commands.front().omega;
  if (!(omega > 0.0) || !std::isfinite(omega)) {
    issues.push_back("omega must be positive and finite");
  }
  for (std::size_t i = 0; i < commands.size(); ++i) {
    if (commands[i].omega != omega) {
      issues.push_back("module " + CellName(config, i) +
                       " breaks phase lock: omega differs");
    }
    if (!(commands[i].amplitude >= 0.0) ||
        !std::isfinite(commands[i].amplitude)) {
      issues.push_back("module " + CellName(config, i) +
                       " has an invalid amplitude");
    }
  }
  for (const auto& p : config.NeighborPairs()) {
    if (!p.vertical) continue;
    const auto& front = commands[p.a];
    const auto& rear = commands[p.b];
    const std::string names =
        CellName(config, p.a) + " -> " + CellName(config, p.b);
    if (front.centerline != rear.centerline) {
      issues.push_back("vertical neighbors " + names +
                       " use different centerlines");
    }
    const bool too_large =
        front.amplitude > 0.0
            ? rear.amplitude > gamma_limit * front.amplitude
            : rear.amplitude > 0.0;
    if (too_large) {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.4g", front.amplitude > 0.0
                                                  ? rear.amplitude / front.amplitude
                                                  : std::numeric_limits<double>::infinity());
      issues.push_back("vertical neighbors " + names + " amplitude ratio " +
                       buf + " exceeds the wake gain limit");
    }
  }
  return issues;
}

Certificate CertifyNoUndock(const LatticeConfiguration& config,
                            std::span<const WaveformCommand> commands,
                            const CertificateOptions& options) {
  return Certify<true>(config, commands, options);
}

Certificate CertifyNoUndockSerial(const LatticeConfiguration& config,
                                  std::span<const WaveformCommand> commands,
                                  const CertificateOptions& options) {
  return Certify<false>(config, commands, options);
}

void CertificateLog::Add(const Certificate& c, std::size_t cycle) {
  if (cycles == 0 || c.min_clearance < min_clearance) {
    min_clearance = c.min_clearance;
    worst = c;
    worst_cycle = cycle;
  }
  ++cycles;
  if (!c.ok) ++failed_cycles;
  if (c.collision) ++collision_cycles;
  for (const auto& v : c.violations) {
    if (violations.size() >= kMaxLoggedViolations) break;
    violations.push_back("cycle " + std::to_string(cycle) + ": " + v);
  }
}

nlohmann::json ToJson(const Certificate& c,
                      const LatticeConfiguration& config) {
  nlohmann::json j{{"ok", c.ok},
                   {"preconditions_ok", c.violations.empty()},
                   {"violations", c.violations},
                   {"collision", c.collision},
                   {"min_clearance_m", c.min_clearance}};
  if (c.worst_a && c.worst_b) {
    j["worst_pair"] = {{"a", CellJson(config, *c.worst_a)},
                       {"b", CellJson(config, *c.worst_b)},
                       {"vertical", c.worst_vertical}};
    j["worst_time_s"] = c.worst_time;
  } else {
    j["worst_pair"] = nullptr;
    j["worst_time_s"] = nullptr;
  }
  return j;
}

nlohmann::json CertificateLog::ToJson(const LatticeConfiguration& config,
                                      const CertificateOptions& options) const {
  nlohmann::json j{{"ok", ok()},
                   {"cycles_checked", cycles},
                   {"failed_cycles", failed_cycles},
                   {"collision_cycles", collision_cycles},
                   {"violations", violations},
                   {"min_clearance_m", min_clearance},
                   {"samples_per_cycle", options.samples_per_cycle},
                   {"boundary_samples", options.boundary_samples},
                   {"gamma_limit", options.gamma_limit},
                   {"clearance_horizon_m", options.clearance_horizon}};
  j["worst_cycle"] = worst_cycle ? nlohmann::json(*worst_cycle) : nullptr;
  j["worst"] = flotilla::ToJson(worst, config);
  return j;
}

}  // namespace flotilla
