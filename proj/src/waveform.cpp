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

#include "flotilla/waveform.hpp"

#include <algorithm>
#include <cmath>

#include "flotilla/error.hpp"

namespace flotilla {

void ThrustModel::Validate() const {
  if (!(k_f > 0.0) || !std::isfinite(k_f)) {
    throw ParameterError("thrust slope k_f must be positive");
  }
  if (!(a_dead >= 0.0) || !(a_max > a_dead)) {
    throw ParameterError("require 0 <= A_dead < A_max");
  }
  if (alpha.empty() || alpha.front() != 1.0) {
    throw ParameterError("alpha table must start with alpha(1) = 1");
  }
  for (std::size_t k = 0; k < alpha.size(); ++k) {
    if (!(alpha[k] > 0.0)) throw ParameterError("alpha values must be > 0");
    if (k > 0 && alpha[k] > alpha[k - 1]) {
      throw ParameterError("alpha must be non-increasing in rank");
    }
  }
  if (gamma.empty() || gamma.front() != 1.0) {
    throw ParameterError("gamma table must start with gamma(1) = 1");
  }
  for (double g : gamma) {
    if (!(g > 0.0) || !std::isfinite(g)) {
      throw ParameterError("gamma values must be positive");
    }
  }
}

double ThrustModel::Alpha(int rank) const {
  if (rank < 1) throw ParameterError("rank must be >= 1");
  const auto k = static_cast<std::size_t>(rank);
  return k <= alpha.size() ? alpha[k - 1] : alpha.back();
}

double ThrustModel::Gamma(int rank) const {
  if (rank < 1) throw ParameterError("rank must be >= 1");
  const auto k = static_cast<std::size_t>(rank);
  return k <= gamma.size() ? gamma[k - 1] : 1.0;
}

double ThrustModel::WakeGain(int rank) const {
  double gain = 1.0;
  for (int k = 2; k <= rank; ++k) gain *= Gamma(k);
  return gain;
}

double CycleAverageThrust(const ThrustModel& model, const WaveformCommand& cmd,
                          int rank) {
  const double a = std::min(cmd.amplitude, model.a_max);
  const double magnitude =
      model.Alpha(rank) * model.k_f * std::max(0.0, a - model.a_dead);
  return cmd.centerline == Centerline::kForward ? magnitude : -magnitude;
}

AmplitudeDemand InvertThrust(const ThrustModel& model, double force_magnitude,
                             int rank) {
  if (force_magnitude < 0.0) {
    throw ParameterError("force magnitude must be non-negative");
  }
  const double a =
      model.a_dead + force_magnitude / (model.Alpha(rank) * model.k_f);
  if (a > model.a_max) return {model.a_max, true};
  return {a, false};
}

}  // namespace flotilla
