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

// Phase-locked tail waveform and the amplitude <-> cycle-averaged thrust map.

#ifndef FLOTILLA_WAVEFORM_HPP_
#define FLOTILLA_WAVEFORM_HPP_

#include <vector>

#include "flotilla/angles.hpp"

namespace flotilla {

enum class Centerline { kForward, kReverse };

inline double CenterlineAngle(Centerline c) {
  return c == Centerline::kForward ? 0.0 : kPi;
}

inline constexpr double kDefaultCyclePeriod = 1.5;  // s
inline constexpr double kDefaultOmega = kTwoPi / kDefaultCyclePeriod;

// One module's actuation for one cycle. Angles in rad, omega in rad/s.
struct WaveformCommand {
  Centerline centerline = Centerline::kForward;
  double amplitude = 0.0;
  double omega = kDefaultOmega;

  friend bool operator==(const WaveformCommand&,
                         const WaveformCommand&) = default;
};

// phi(t) = phi0 + A cos(omega t) cos(phi0). Not wrapped.
inline double TailAngle(const WaveformCommand& cmd, double t) {
  const double phi0 = CenterlineAngle(cmd.centerline);
  return phi0 + cmd.amplitude * std::cos(cmd.omega * t) * std::cos(phi0);
}

// Slope giving the 5-module parallel line (C_L = 13.7 kg/m) the thrust it
// needs to hold 6 cm/s at full amplitude, times `margin`.
constexpr double CalibratedThrustSlope(double margin, double a_dead = 0.75,
                                       double a_max = 2.5) {
  return margin * (13.7 * 0.06 * 0.06 / 5.0) / (a_max - a_dead);
}

// Documented calibration range for k_f, expressed as thrust margins.
inline constexpr double kCalibrationMarginLow = 1.1;
inline constexpr double kCalibrationMarginHigh = 1.5;
inline constexpr double kDefaultCalibrationMargin = 1.3;

// Amplitude -> cycle-averaged thrust for a module of rear rank k:
//   f = sign(phi0) * alpha(k) * k_f * max(0, A - A_dead),  A <= A_max.
//
// alpha and gamma are indexed by rank starting at 1. Ranks past the end of
// a table reuse the last alpha (the loss is assumed to saturate) and use a
// gamma of 1.
class ThrustModel {
 public:
  double a_dead = 0.75;           // rad
  double a_max = 2.5;             // rad
  double k_f = CalibratedThrustSlope(kDefaultCalibrationMargin);  // N/rad
  std::vector<double> alpha = {1.0, 0.72, 0.67};
  std::vector<double> gamma = {1.0, 1.49, 1.07};

  // Throws ParameterError if the model is unusable.
  void Validate() const;

  double Alpha(int rank) const;
  double Gamma(int rank) const;
  // Product gamma(2) * ... * gamma(rank): the amplitude multiplier of a
  // rank-k module relative to the front module of its column.
  double WakeGain(int rank) const;
};

// Signed cycle-averaged force along the module's body y axis, N.
double CycleAverageThrust(const ThrustModel& model, const WaveformCommand& cmd,
                          int rank);

struct AmplitudeDemand {
  double amplitude = 0.0;  // rad, clipped to [0, A_max]
  bool saturated = false;  // the unclipped demand exceeded A_max
};

// Inverse of CycleAverageThrust for a given rank:
//   A = A_dead + |f| / (alpha(k) k_f), clipped to A_max.
AmplitudeDemand InvertThrust(const ThrustModel& model, double force_magnitude,
                             int rank);

}  // namespace flotilla

#endif  // FLOTILLA_WAVEFORM_HPP_
