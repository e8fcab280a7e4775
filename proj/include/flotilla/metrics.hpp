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

// Step-response metrics: 0.3 to 0.9 rise time and RMS tracking error.

#ifndef FLOTILLA_METRICS_HPP_
#define FLOTILLA_METRICS_HPP_

#include <optional>
#include <span>

namespace flotilla {

struct StepMetrics {
  double step_time = 0.0;
  double initial = 0.0;  // response value at the step
  double target = 0.0;
  std::optional<double> rise_time;  // t(0.9 step) - t(0.3 step)
  // RMS of target - response over samples after the 0.9 crossing, or after
  // the step when the crossing never happens.
  double rms_error = 0.0;
  double rms_window_start = 0.0;
  double final_error = 0.0;
};

// `angular` wraps errors to (-pi, pi]. The step size is target minus the
// response at the first sample at or after step_time.
StepMetrics ComputeStepMetrics(std::span<const double> t,
                               std::span<const double> response,
                               double step_time, double target, bool angular);

}  // namespace flotilla

#endif  // FLOTILLA_METRICS_HPP_
