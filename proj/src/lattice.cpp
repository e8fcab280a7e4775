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

#include "flotilla/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <set>
#include <string>

#include "flotilla/error.hpp"

namespace flotilla {

namespace {

bool RowMajorLess(const GridCell& a, const GridCell& b) {
  return a.row != b.row ? a.row < b.row : a.col < b.col;
}

bool IsConnected(const std::vector<GridCell>& cells) {
  const std::set<GridCell> occupied(cells.begin(), cells.end());
  std::set<GridCell> seen{cells.front()};
  std::queue<GridCell> frontier;
  frontier.push(cells.front());
  while (!frontier.empty()) {
    const GridCell c = frontier.front();
    frontier.pop();
    const GridCell next[] = {{c.col + 1, c.row}, {c.col - 1, c.row},
                             {c.col, c.row + 1}, {c.col, c.row - 1}};
    for (const auto& n : next) {
      if (occupied.contains(n) && seen.insert(n).second) frontier.push(n);
    }
  }
  return seen.size() == occupied.size();
}

std::size_t DistinctCount(const std::vector<GridCell>& cells, bool columns) {
  std::set<int> values;
  for (const auto& c : cells) values.insert(columns ? c.col : c.row);
  return values.size();
}

}  // namespace

StructuralMatrix::StructuralMatrix(std::vector<double> surge_row,
                                   std::vector<double> yaw_row)
    : surge_row_(std::move(surge_row)), yaw_row_(std::move(yaw_row)) {
  if (surge_row_.size() != yaw_row_.size()) {
    throw ParameterError("structural matrix rows differ in length");
  }
}

int StructuralMatrix::Rank() const {
  double g00 = 0.0, g01 = 0.0, g11 = 0.0;
  for (std::size_t i = 0; i < cols(); ++i) {
    g00 += surge_row_[i] * surge_row_[i];
    g01 += surge_row_[i] * yaw_row_[i];
    g11 += yaw_row_[i] * yaw_row_[i];
  }
  if (g00 == 0.0 && g11 == 0.0) return 0;
  const double det = g00 * g11 - g01 * g01;
  return det > 1e-12 * g00 * g11 ? 2 : 1;
}

LatticeConfiguration::LatticeConfiguration(std::vector<GridCell> cells,
                                           double pitch)
    : cells_(std::move(cells)), pitch_(pitch) {
  const double n = static_cast<double>(cells_.size());
  double mean_col = 0.0, mean_row = 0.0;
  for (const auto& c : cells_) {
    mean_col += c.col;
    mean_row += c.row;
  }
  mean_col /= n;
  mean_row /= n;

  // Offsets are a function of the cell alone, so modules sharing a column
  // get bitwise-identical x offsets.
  geometry_.reserve(cells_.size());
  for (const auto& c : cells_) {
    ModuleGeometry g;
    g.x_off = (c.col - mean_col) * pitch_;
    g.y_off = (c.row - mean_row) * pitch_;
    g.rear_rank = 1;
    for (const auto& other : cells_) {
      if (other.col == c.col && other.row > c.row) ++g.rear_rank;
    }
    geometry_.push_back(g);
  }
}

LatticeConfiguration LatticeConfiguration::Build(std::vector<GridCell> cells,
                                                 double pitch) {
  if (cells.empty()) throw ConfigurationError("configuration has no cells");
  if (!(pitch > 0.0) || !std::isfinite(pitch)) {
    throw ConfigurationError("pitch must be positive and finite");
  }
  std::sort(cells.begin(), cells.end(), RowMajorLess);
  const auto dup = std::adjacent_find(cells.begin(), cells.end());
  if (dup != cells.end()) {
    throw ConfigurationError("duplicate cell (" + std::to_string(dup->col) +
                             ", " + std::to_string(dup->row) + ")");
  }
  if (!IsConnected(cells)) {
    throw ConfigurationError("configuration is not edge-connected");
  }
  if (DistinctCount(cells, /*columns=*/true) < 2) {
    throw ConfigurationError(
        "configuration must be at least two modules wide to be steerable");
  }
  return LatticeConfiguration(std::move(cells), pitch);
}

std::optional<std::size_t> LatticeConfiguration::IdOf(GridCell cell) const {
  const auto it =
      std::lower_bound(cells_.begin(), cells_.end(), cell, RowMajorLess);
  if (it == cells_.end() || *it != cell) return std::nullopt;
  return static_cast<std::size_t>(it - cells_.begin());
}

std::vector<Vec2> LatticeConfiguration::Offsets() const {
  std::vector<Vec2> out;
  out.reserve(geometry_.size());
  for (const auto& g : geometry_) out.push_back({g.x_off, g.y_off});
  return out;
}

StructuralMatrix LatticeConfiguration::Structural() const {
  std::vector<double> ones(size(), 1.0);
  std::vector<double> arms;
  arms.reserve(size());
  for (const auto& g : geometry_) arms.push_back(g.x_off);
  return StructuralMatrix(std::move(ones), std::move(arms));
}

ProjectionWidths LatticeConfiguration::Widths() const {
  const int cols = static_cast<int>(DistinctCount(cells_, true));
  const int rows = static_cast<int>(DistinctCount(cells_, false));
  return {cols, std::max(cols, rows)};
}

std::vector<int> LatticeConfiguration::RearRanks() const {
  std::vector<int> ranks;
  ranks.reserve(size());
  for (const auto& g : geometry_) ranks.push_back(g.rear_rank);
  return ranks;
}

std::vector<LatticeConfiguration::NeighborPair>
LatticeConfiguration::NeighborPairs() const {
  std::vector<NeighborPair> pairs;
  for (std::size_t a = 0; a < cells_.size(); ++a) {
    const GridCell c = cells_[a];
    if (auto right = IdOf({c.col + 1, c.row})) {
      pairs.push_back({a, *right, false});
    }
    if (auto behind = IdOf({c.col, c.row - 1})) {
      pairs.push_back({a, *behind, true});
    }
  }
  return pairs;
}

MassProperties AggregateInertia(std::span<const Vec2> offsets,
                                double module_mass, double module_inertia) {
  if (!(module_mass > 0.0) || !(module_inertia > 0.0)) {
    throw ParameterError("module mass and inertia must be positive");
  }
  MassProperties out;
  double spread = 0.0;
  for (const auto& o : offsets) spread += o.x * o.x + o.y * o.y;
  const double n = static_cast<double>(offsets.size());
  out.mass = n * module_mass;
  out.inertia = n * module_inertia + module_mass * spread;
  return out;
}

MassProperties AggregateInertia(const LatticeConfiguration& config,
                                double module_mass, double module_inertia) {
  const auto offsets = config.Offsets();
  return AggregateInertia(offsets, module_mass, module_inertia);
}

ConfigurationFile ParseConfiguration(const nlohmann::json& j) {
  std::vector<std::string> issues;
  if (!j.is_object()) {
    throw ValidationError({"configuration must be a JSON object"});
  }
  std::vector<GridCell> cells;
  if (!j.contains("cells")) {
    issues.push_back("configuration.cells is required");
  } else if (!j["cells"].is_array()) {
    issues.push_back("configuration.cells must be an array of [col, row]");
  } else {
    for (const auto& c : j["cells"]) {
      if (!c.is_array() || c.size() != 2 || !c[0].is_number_integer() ||
          !c[1].is_number_integer()) {
        issues.push_back("configuration.cells entries must be [col, row]");
        break;
      }
      cells.push_back({c[0].get<int>(), c[1].get<int>()});
    }
  }
  double pitch = kDefaultPitch;
  if (j.contains("pitch_m")) {
    if (!j["pitch_m"].is_number()) {
      issues.push_back("configuration.pitch_m must be a number");
    } else {
      pitch = j["pitch_m"].get<double>();
    }
  }
  auto optional_positive = [&](const char* key) -> std::optional<double> {
    if (!j.contains(key)) return std::nullopt;
    if (!j[key].is_number() || !(j[key].get<double>() > 0.0)) {
      issues.push_back(std::string("configuration.") + key +
                       " must be a positive number");
      return std::nullopt;
    }
    return j[key].get<double>();
  };
  auto mass = optional_positive("module_mass_kg");
  auto inertia = optional_positive("module_inertia_kgm2");
  if (!issues.empty()) throw ValidationError(issues);
  return {LatticeConfiguration::Build(std::move(cells), pitch), mass, inertia};
}

nlohmann::json ToJson(const ConfigurationFile& file) {
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& c : file.configuration.cells()) {
    cells.push_back({c.col, c.row});
  }
  nlohmann::json j{{"cells", cells}, {"pitch_m", file.configuration.pitch()}};
  if (file.module_mass) j["module_mass_kg"] = *file.module_mass;
  if (file.module_inertia) j["module_inertia_kgm2"] = *file.module_inertia;
  return j;
}

}  // namespace flotilla
