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

#include "flotilla/hydro.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <Eigen/Dense>

#include "flotilla/error.hpp"

namespace flotilla {

namespace {

constexpr double kGramM2 = 1e-3;  // g m^2 -> kg m^2

}  // namespace

DragTable::DragTable(std::vector<DragEntry> entries)
    : entries_(std::move(entries)) {
  if (entries_.empty()) throw ParameterError("drag table is empty");
  std::sort(entries_.begin(), entries_.end(),
            [](const DragEntry& a, const DragEntry& b) {
              return a.count < b.count;
            });
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& e = entries_[i];
    if (e.count != static_cast<int>(i) + 1) {
      throw ParameterError("drag table must cover counts 1..K contiguously");
    }
    for (double v : {e.mass, e.inertia, e.c_l, e.c_r}) {
      if (!(v > 0.0) || !std::isfinite(v)) {
        throw ParameterError("drag table entries must be positive");
      }
    }
    if (i > 0 && (e.c_l < entries_[i - 1].c_l || e.c_r < entries_[i - 1].c_r)) {
      throw ParameterError("drag coefficients must be non-decreasing");
    }
  }
}

DragTable DragTable::Default() {
  return DragTable({
      {1, 0.66, 2.05 * kGramM2, 2.48, 0.40 * kGramM2},
      {2, 1.32, 11.8 * kGramM2, 4.67, 6.50 * kGramM2},
      {3, 1.98, 36.8 * kGramM2, 7.00, 32.0 * kGramM2},
      {4, 2.64, 84.8 * kGramM2, 9.75, 107.0 * kGramM2},
      {5, 3.30, 164.0 * kGramM2, 13.7, 307.0 * kGramM2},
  });
}

const DragEntry& DragTable::at(int count) const {
  if (count < 1 || count > max_count()) {
    throw ParameterError("no drag table entry for width " +
                         std::to_string(count) + " (table covers 1.." +
                         std::to_string(max_count()) + ")");
  }
  return entries_[static_cast<std::size_t>(count - 1)];
}

DragTable DragTable::FromJson(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("rows") || !j["rows"].is_array()) {
    throw ValidationError({"drag table must be an object with a rows array"});
  }
  std::vector<DragEntry> rows;
  std::vector<std::string> issues;
  for (const auto& r : j["rows"]) {
    DragEntry e;
    try {
      e.count = r.at("count").get<int>();
      e.mass = r.at("mass_kg").get<double>();
      e.inertia = r.at("inertia_gm2").get<double>() * kGramM2;
      e.c_l = r.at("c_l_kg_per_m").get<double>();
      e.c_r = r.at("c_r_gm2").get<double>() * kGramM2;
    } catch (const nlohmann::json::exception& ex) {
      issues.push_back(std::string("drag table row: ") + ex.what());
      continue;
    }
    rows.push_back(e);
  }
  if (!issues.empty()) throw ValidationError(issues);
  return DragTable(std::move(rows));
}

nlohmann::json DragTable::ToJson() const {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& e : entries_) {
    rows.push_back({{"count", e.count},
                    {"mass_kg", e.mass},
                    {"inertia_gm2", e.inertia / kGramM2},
                    {"c_l_kg_per_m", e.c_l},
                    {"c_r_gm2", e.c_r / kGramM2}});
  }
  return {{"rows", rows}};
}

DragCoefficients DragLookup(const DragTable& table, ProjectionWidths widths) {
  return {table.at(widths.x_width).c_l, table.at(widths.max_width).c_r};
}

std::vector<double> AlphaFromSlopes(std::span<const double> slopes) {
  if (slopes.size() < 2) {
    throw ParameterError("need the baseline slope and at least one more");
  }
  const double m0 = slopes[0];
  if (!(m0 > 0.0)) throw ParameterError("baseline slope must be positive");
  std::vector<double> alpha;
  for (std::size_t k = 1; k < slopes.size(); ++k) {
    const double a = k == 1 ? slopes[1] / m0 : (slopes[k] - slopes[k - 1]) / m0;
    if (!(a > 0.0)) {
      throw ParameterError("alpha(" + std::to_string(k) +
                           ") <= 0: slopes must increase with k");
    }
    alpha.push_back(a);
  }
  return alpha;
}

std::vector<double> GammaFromAlpha(std::span<const double> alpha) {
  std::vector<double> gamma;
  for (std::size_t k = 0; k < alpha.size(); ++k) {
    if (!(alpha[k] > 0.0)) throw ParameterError("alpha values must be > 0");
    gamma.push_back(k == 0 ? 1.0 : alpha[k - 1] / alpha[k]);
  }
  return gamma;
}

DecayFit FitDecay(std::span<const double> t, std::span<const double> v,
                  double mass) {
  if (t.size() != v.size()) throw FitError("t and v differ in length");
  const std::size_t n = t.size();
  if (n < 10) throw FitError("need at least 10 samples");
  if (!(mass > 0.0)) throw FitError("mass must be positive");
  if (!(v[0] > 0.0)) throw FitError("first sample must be positive");
  for (std::size_t i = 1; i < n; ++i) {
    if (!(t[i] > t[i - 1])) throw FitError("times must be increasing");
  }
  const double noise_floor = 0.1 * v[0];
  double running_min = v[0];
  for (std::size_t i = 1; i < n; ++i) {
    if (v[i] - running_min > noise_floor) {
      throw FitError("series is not monotonically decaying");
    }
    running_min = std::min(running_min, v[i]);
  }
  if (!(v[0] - v[n - 1] > 1e-9 * v[0])) {
    throw FitError("series shows no decay");
  }

  // 1/v is linear in t for this model; two points give the start.
  const double span = t[n - 1] - t[0];
  double v0 = v[0];
  double c = v[n - 1] > 0.0
                 ? mass * (1.0 / v[n - 1] - 1.0 / v[0]) / span
                 : mass * 10.0 / (v[0] * span);
  c = std::max(c, 1e-12);

  auto cost = [&](double v0_, double c_) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = v[i] - v0_ / (1.0 + c_ * v0_ * (t[i] - t[0]) / mass);
      s += r * r;
    }
    return s;
  };

  DecayFit fit;
  double current = cost(v0, c);
  for (int it = 1; it <= 100; ++it) {
    fit.iterations = it;
    double a00 = 0.0, a01 = 0.0, a11 = 0.0, b0 = 0.0, b1 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double s = t[i] - t[0];
      const double q = 1.0 + c * v0 * s / mass;
      const double model = v0 / q;
      const double j0 = 1.0 / (q * q);
      const double j1 = -v0 * v0 * s / (mass * q * q);
      const double r = v[i] - model;
      a00 += j0 * j0;
      a01 += j0 * j1;
      a11 += j1 * j1;
      b0 += j0 * r;
      b1 += j1 * r;
    }
    const double det = a00 * a11 - a01 * a01;
    if (!(std::abs(det) > 0.0)) throw FitError("singular normal equations");
    const double d0 = (a11 * b0 - a01 * b1) / det;
    const double d1 = (a00 * b1 - a01 * b0) / det;
    // Step halving keeps the iteration monotone in cost.
    double step = 1.0;
    double next = current;
    double nv0 = v0, nc = c;
    for (int h = 0; h < 30; ++h) {
      nv0 = v0 + step * d0;
      nc = c + step * d1;
      if (nv0 > 0.0 && nc > 0.0) {
        next = cost(nv0, nc);
        if (next <= current) break;
      }
      step *= 0.5;
    }
    const double rel = std::max(std::abs(nv0 - v0) / std::abs(v0),
                                std::abs(nc - c) / std::abs(c));
    if (next <= current) {
      v0 = nv0;
      c = nc;
      current = next;
    }
    if (rel < 1e-12 || step < 1e-8) {
      fit.converged = true;
      break;
    }
  }
  if (!fit.converged) throw FitError("Gauss-Newton did not converge");
  fit.coefficient = c;
  fit.v0 = v0;
  fit.rms_residual = std::sqrt(current / static_cast<double>(n));
  return fit;
}

SlopeFit FitThrustSlopes(std::span<const ThrustSample> samples) {
  std::map<int, std::vector<ThrustSample>> groups;
  for (const auto& s : samples) {
    if (s.k < 0) throw FitError("group index k must be >= 0");
    groups[s.k].push_back(s);
  }
  const int groups_n = static_cast<int>(groups.size());
  if (groups_n < 2 || groups.begin()->first != 0 ||
      groups.rbegin()->first != groups_n - 1) {
    throw FitError("need contiguous groups k = 0..K with K >= 1");
  }
  for (const auto& [k, g] : groups) {
    const auto [lo, hi] = std::minmax_element(
        g.begin(), g.end(), [](const ThrustSample& a, const ThrustSample& b) {
          return a.amplitude < b.amplitude;
        });
    if (!(hi->amplitude > lo->amplitude)) {
      throw FitError("group " + std::to_string(k) +
                     " needs two distinct amplitudes");
    }
  }

  // Start from independent line fits, then refine all slopes and the shared
  // intercept jointly by Gauss-Newton.
  Eigen::VectorXd p(groups_n + 1);
  double intercept_sum = 0.0;
  for (const auto& [k, g] : groups) {
    Eigen::MatrixXd a(static_cast<Eigen::Index>(g.size()), 2);
    Eigen::VectorXd b(static_cast<Eigen::Index>(g.size()));
    for (std::size_t i = 0; i < g.size(); ++i) {
      const auto row = static_cast<Eigen::Index>(i);
      a(row, 0) = g[i].amplitude;
      a(row, 1) = 1.0;
      b(row) = g[i].force;
    }
    const Eigen::Vector2d line = a.colPivHouseholderQr().solve(b);
    if (!(line(0) > 0.0)) {
      throw FitError("group " + std::to_string(k) + " has non-positive slope");
    }
    p(k) = line(0);
    intercept_sum += -line(1) / line(0);
  }
  p(groups_n) = intercept_sum / groups_n;

  const auto m = static_cast<Eigen::Index>(samples.size());
  auto residuals = [&](const Eigen::VectorXd& q) {
    Eigen::VectorXd r(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      const auto& s = samples[static_cast<std::size_t>(i)];
      r(i) = s.force - q(s.k) * (s.amplitude - q(groups_n));
    }
    return r;
  };

  SlopeFit fit;
  bool converged = false;
  for (int it = 1; it <= 50; ++it) {
    fit.iterations = it;
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(m, groups_n + 1);
    for (Eigen::Index i = 0; i < m; ++i) {
      const auto& s = samples[static_cast<std::size_t>(i)];
      jac(i, s.k) = s.amplitude - p(groups_n);
      jac(i, groups_n) = -p(s.k);
    }
    const Eigen::VectorXd delta =
        jac.colPivHouseholderQr().solve(residuals(p));
    p += delta;
    if (delta.norm() <= 1e-12 * (1.0 + p.norm())) {
      converged = true;
      break;
    }
  }
  if (!converged) throw FitError("shared-intercept fit did not converge");

  fit.slopes.assign(p.data(), p.data() + groups_n);
  fit.intercept = p(groups_n);
  fit.rms_residual =
      std::sqrt(residuals(p).squaredNorm() / static_cast<double>(m));
  try {
    fit.alpha = AlphaFromSlopes(fit.slopes);
  } catch (const ParameterError& e) {
    throw FitError(e.what());
  }
  fit.gamma = GammaFromAlpha(fit.alpha);
  return fit;
}

}  // namespace flotilla
