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

// Drag coefficients by projected width, wake thrust loss, and the fitting
// procedures that produce both from measured series.

#ifndef FLOTILLA_HYDRO_HPP_
#define FLOTILLA_HYDRO_HPP_

#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "flotilla/lattice.hpp"

namespace flotilla {

// One row of the parallel-configuration drag table, SI units.
struct DragEntry {
  int count = 0;         // modules in the parallel row
  double mass = 0.0;     // kg
  double inertia = 0.0;  // kg m^2
  double c_l = 0.0;      // kg/m
  double c_r = 0.0;      // kg m^2
};

class DragTable {
 public:
  DragTable() = default;
  // Entries must cover counts 1..K contiguously; throws ParameterError if
  // they do not, or if values are non-positive or not monotone.
  explicit DragTable(std::vector<DragEntry> entries);

  // Measured 1..5 module parallel rows.
  static DragTable Default();

  std::span<const DragEntry> entries() const { return entries_; }
  int max_count() const { return static_cast<int>(entries_.size()); }
  const DragEntry& at(int count) const;

  // JSON rows use the published units: inertia and C_R in g m^2.
  static DragTable FromJson(const nlohmann::json& j);
  nlohmann::json ToJson() const;

 private:
  std::vector<DragEntry> entries_;
};

struct DragCoefficients {
  double c_l = 0.0;
  double c_r = 0.0;
};

// C_L from the x-projection width, C_R from the larger projection width.
// Throws ParameterError for widths outside the table.
DragCoefficients DragLookup(const DragTable& table, ProjectionWidths widths);

// alpha(1) = m_1 / m_0 and alpha(k) = (m_k - m_{k-1}) / m_0 for k >= 2,
// where m_0 is the isolated baseline slope and m_k the slope for k modules
// in a column. Throws ParameterError if any alpha is <= 0.
std::vector<double> AlphaFromSlopes(std::span<const double> slopes);

// gamma(1) = 1, gamma(k) = alpha(k-1) / alpha(k).
std::vector<double> GammaFromAlpha(std::span<const double> alpha);

struct DecayFit {
  double coefficient = 0.0;  // C_L (kg/m) or C_R (kg m^2)
  double v0 = 0.0;           // fitted initial speed at the first sample
  double rms_residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Fits v(t) = v0 / (1 + (C v0 / m)(t - t_0)) by Gauss-Newton, t_0 the first
// sample time. With `inertia` in place of `mass` the same call fits angular
// decay. Throws FitError for fewer than 10 samples, a non-positive first
// sample, rises above the running minimum by more than 10% of v0, a series
// with no decay, or non-convergence.
DecayFit FitDecay(std::span<const double> t, std::span<const double> v,
                  double mass);

struct ThrustSample {
  int k = 0;  // 0 = isolated baseline, k >= 1 = k modules in a column
  double amplitude = 0.0;
  double force = 0.0;
};

struct SlopeFit {
  std::vector<double> slopes;  // m_0 .. m_K
  double intercept = 0.0;      // shared amplitude intercept
  std::vector<double> alpha;
  std::vector<double> gamma;
  double rms_residual = 0.0;
  int iterations = 0;
};

// Fits f = m_k (A - a0) with one intercept a0 shared across every k, then
// derives alpha and gamma. Groups k = 0..K must all be present with at least
// two distinct amplitudes each. Throws FitError otherwise.
SlopeFit FitThrustSlopes(std::span<const ThrustSample> samples);

}  // namespace flotilla

#endif  // FLOTILLA_HYDRO_HPP_
