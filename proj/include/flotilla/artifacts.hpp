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

// Run artifacts: series.csv, metrics.json and certificate.json.

#ifndef FLOTILLA_ARTIFACTS_HPP_
#define FLOTILLA_ARTIFACTS_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include <json.hpp>

#include "flotilla/scenario.hpp"
#include "flotilla/sim.hpp"

namespace flotilla {

// Columns: t, x, y, yaw, v_y, v_x, omega, v_target, yaw_target, v_c,
// alpha_cmd, then per module i (linear id order) a_i, centerline_i (0 or 1)
// and saturated_i for the cycle in force at t.
void WriteSeriesCsv(std::ostream& os, const Scenario& scenario,
                    const SimulationResult& result);

nlohmann::json MetricsJson(const Scenario& scenario,
                           const SimulationResult& result, std::uint64_t seed);

nlohmann::json CertificateJson(const Scenario& scenario,
                               const SimulationResult& result);

// Writes all three files into `dir`, creating it if needed.
void WriteRunArtifacts(const std::filesystem::path& dir,
                       const Scenario& scenario, const SimulationResult& result,
                       std::uint64_t seed);

// Fixed-format JSON text (two-space indent, trailing newline).
void WriteJsonFile(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace flotilla

#endif  // FLOTILLA_ARTIFACTS_HPP_
