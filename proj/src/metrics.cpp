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

#include "flotilla/metrics.hpp"

#include <cmath>

#include "flotilla/angles.hpp"
#include "flotilla/error.hpp"

namespace flotilla {

StepMetrics ComputeStepMetrics(std::span<const double> t,
                               std::span<const double> response,
                               double step_time, double target, bool angular) {
  if (t.size() != response.size() || t.empty()) {
    throw ParameterError("metrics need equal-length, non-empty series");
  }
  auto error = [&](double y) {
    return angular ? WrapAngle(target - y) : target - y;
  };
  std::size_t start = 0;
  while (start < t.size() && t[start] < step_time) ++start;
  if (start == t.size()) throw ParameterError("series ends before the step");

  StepMetrics m;
  m.step_time = step_time;
  m.initial = response[start];
  m.target = target;
  const double step = angular ? WrapAngle(target - m.initial) : target - m.initial;

  std::optional<double> t30;
  std::optional<std::size_t> i90;
  if (step != 0.0) {
    for (std::size_t i = start; i < t.size(); ++i) {
      const double progress = (step - error(response[i])) / step;
      if (!t30 && progress >= 0.3) t30 = t[i];
      if (t30 && progress >= 0.9) {
        i90 = i;
        break;
      }
    }
  } else {
    i90 = start;
    t30 = t[start];
  }
  if (i90) m.rise_time = t[*i90] - *t30;

  const std::size_t from = i90 ? *i90 : start;
  m.rms_window_start = t[from];
  double sum = 0.0;
  for (std::size_t i = from; i < t.size(); ++i) {
    const double e = error(response[i]);
    sum += e * e;
  }
  m.rms_error = std::sqrt(sum / static_cast<double>(t.size() - from));
  m.final_error = error(response.back());
  return m;
}

}  // namespace flotilla
