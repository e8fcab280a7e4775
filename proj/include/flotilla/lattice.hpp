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

// Docked configurations on a rectangular lattice.
//
// Grid conventions: a cell is (col, row). Columns grow along the body x axis
// (lateral, sway) and rows grow along the body y axis (forward, surge), so a
// module with a larger row index sits in front of one with a smaller row
// index in the same column. Linear module ids are row-major: cells sorted by
// (row, col) ascending.

#ifndef FLOTILLA_LATTICE_HPP_
#define FLOTILLA_LATTICE_HPP_

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <json.hpp>

#include "flotilla/angles.hpp"

namespace flotilla {

struct GridCell {
  int col = 0;
  int row = 0;

  friend auto operator<=>(const GridCell&, const GridCell&) = default;
};

// Per-module geometry relative to the configuration COM.
struct ModuleGeometry {
  double x_off = 0.0;  // m, along body x
  double y_off = 0.0;  // m, along body y
  int rear_rank = 1;   // 1 + number of modules ahead in the same column
};

struct ProjectionWidths {
  int x_width = 0;    // distinct columns
  int max_width = 0;  // max(distinct columns, distinct rows)

  friend bool operator==(const ProjectionWidths&,
                         const ProjectionWidths&) = default;
};

struct MassProperties {
  double mass = 0.0;     // kg
  double inertia = 0.0;  // kg m^2 about the COM
};

// Measured single-module defaults.
inline constexpr double kModuleMass = 0.66;       // kg
inline constexpr double kModuleInertia = 2.05e-3; // kg m^2
inline constexpr double kDefaultPitch = 0.1524;   // m, 2 * top-body radius

// The 2 x N map from per-module surge forces to (net surge force, yaw
// torque). Row 0 is the surge row, row 1 the lever-arm row.
class StructuralMatrix {
 public:
  StructuralMatrix(std::vector<double> surge_row, std::vector<double> yaw_row);

  std::size_t cols() const { return surge_row_.size(); }
  std::span<const double> surge_row() const { return surge_row_; }
  std::span<const double> yaw_row() const { return yaw_row_; }
  double operator()(int row, std::size_t col) const {
    return row == 0 ? surge_row_[col] : yaw_row_[col];
  }

  // Numerical rank (0, 1 or 2) using a relative tolerance on the Gram
  // determinant.
  int Rank() const;

 private:
  std::vector<double> surge_row_;
  std::vector<double> yaw_row_;
};

class LatticeConfiguration {
 public:
  // Empty placeholder with no modules; Build() is the only way to obtain a
  // valid configuration.
  LatticeConfiguration() = default;

  // Validates and numbers the cells. Throws ConfigurationError for an empty
  // or duplicated cell set, a disconnected set (edge adjacency only), or a
  // set spanning fewer than two columns.
  static LatticeConfiguration Build(std::vector<GridCell> cells,
                                    double pitch = kDefaultPitch);

  std::size_t size() const { return cells_.size(); }
  double pitch() const { return pitch_; }

  // Cells in linear-id order.
  std::span<const GridCell> cells() const { return cells_; }
  const GridCell& cell(std::size_t id) const { return cells_.at(id); }
  std::optional<std::size_t> IdOf(GridCell cell) const;

  std::span<const ModuleGeometry> geometry() const { return geometry_; }
  const ModuleGeometry& geometry(std::size_t id) const {
    return geometry_.at(id);
  }

  // COM-relative module centers in the body frame.
  std::vector<Vec2> Offsets() const;

  StructuralMatrix Structural() const;
  ProjectionWidths Widths() const;
  std::vector<int> RearRanks() const;

  // Edge-adjacent pairs (a, b) by linear id. Horizontal pairs have b to the
  // right of a; vertical pairs have b directly behind a.
  struct NeighborPair {
    std::size_t a = 0;
    std::size_t b = 0;
    bool vertical = false;
  };
  std::vector<NeighborPair> NeighborPairs() const;

  friend bool operator==(const LatticeConfiguration& lhs,
                         const LatticeConfiguration& rhs) {
    return lhs.cells_ == rhs.cells_ && lhs.pitch_ == rhs.pitch_;
  }

 private:
  LatticeConfiguration(std::vector<GridCell> cells, double pitch);

  std::vector<GridCell> cells_;
  double pitch_ = kDefaultPitch;
  std::vector<ModuleGeometry> geometry_;
};

// Parallel-axis aggregation for identical modules.
MassProperties AggregateInertia(std::span<const Vec2> offsets,
                                double module_mass, double module_inertia);
MassProperties AggregateInertia(const LatticeConfiguration& config,
                                double module_mass = kModuleMass,
                                double module_inertia = kModuleInertia);

// Configuration file: {"cells": [[col, row], ...], "pitch_m": ...} plus the
// optional "module_mass_kg" and "module_inertia_kgm2" overrides, which apply
// to every module.
struct ConfigurationFile {
  LatticeConfiguration configuration;
  std::optional<double> module_mass;
  std::optional<double> module_inertia;
};

ConfigurationFile ParseConfiguration(const nlohmann::json& j);
nlohmann::json ToJson(const ConfigurationFile& file);

}  // namespace flotilla

#endif  // FLOTILLA_LATTICE_HPP_
