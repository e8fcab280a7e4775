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

#include "flotilla/collision.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <queue>

#include "flotilla/error.hpp"

namespace flotilla {

void TailShape::Validate() const {
  if (!(r_t > 0.0) || !std::isfinite(r_t)) {
    throw ParameterError("r_t must be positive");
  }
  if (!(r_p >= 0.0) || !(r_p < r_t)) {
    throw ParameterError("r_p must satisfy 0 <= r_p < r_t");
  }
  if (!(theta_w > 0.0) || !(theta_w < kPi)) {
    throw ParameterError("theta_w must lie in (0, pi)");
  }
}

double TailRadius(double theta, double tip, const TailShape& shape) {
  const double d = std::abs(WrapAngle(theta - tip));
  return std::max(0.0, shape.r_t + shape.r_p * (1.0 - d / shape.theta_w));
}

PairChecker::PairChecker(TailShape shape, int boundary_samples)
    : shape_(shape), n_(boundary_samples) {
  shape_.Validate();
  if (n_ < 8) throw ParameterError("need at least 8 boundary samples");
  radius_.resize(static_cast<std::size_t>(n_));
  cos_u_.resize(radius_.size());
  sin_u_.resize(radius_.size());
  for (int k = 0; k < n_; ++k) {
    const double u = kTwoPi * k / n_;
    const auto i = static_cast<std::size_t>(k);
    radius_[i] = TailRadius(u, 0.0, shape_);
    cos_u_[i] = std::cos(u);
    sin_u_[i] = std::sin(u);
  }
}

PairChecker::Frame PairChecker::MakeFrame(Vec2 center, double phi) {
  const double tip = TipDirection(phi);
  return {center, std::cos(tip), std::sin(tip)};
}

Vec2 PairChecker::BoundaryPoint(const Frame& f, int k) const {
  const auto i = static_cast<std::size_t>(k);
  const double c = f.cos_tip * cos_u_[i] - f.sin_tip * sin_u_[i];
  const double s = f.sin_tip * cos_u_[i] + f.cos_tip * sin_u_[i];
  return {f.center.x + radius_[i] * c, f.center.y + radius_[i] * s};
}

double PairChecker::Margin(Vec2 p, const Frame& f) const {
  const double dx = p.x - f.center.x;
  const double dy = p.y - f.center.y;
  // Polar angle of p relative to the tip, already in (-pi, pi].
  const double lx = dx * f.cos_tip + dy * f.sin_tip;
  const double ly = -dx * f.sin_tip + dy * f.cos_tip;
  const double rel = std::atan2(ly, lx);
  const double r = std::max(
      0.0, shape_.r_t + shape_.r_p * (1.0 - std::abs(rel) / shape_.theta_w));
  return std::sqrt(dx * dx + dy * dy) - r;
}

double PairChecker::ConeMaxRadius(double tip, double axis,
                                  double half_width) const {
  const double nearest =
      std::max(0.0, std::abs(WrapAngle(tip - axis)) - half_width);
  return std::max(0.0,
                  shape_.r_t + shape_.r_p * (1.0 - nearest / shape_.theta_w));
}

double PairChecker::FacingHalfWidth(double distance) const {
  const double r = shape_.r_t + shape_.r_p;
  return std::acos(std::min(1.0, distance / (2.0 * r)));
}

namespace {

// Calls fn(k) for every sample index whose polar angle tip + 2 pi k / n lies
// within half_width of axis, plus one index of slack on each side.
template <typename Fn>
bool AnyFacing(int n, double tip, double axis, double half_width, Fn&& fn) {
  const double step = kTwoPi / n;
  const double rel = WrapAngle(axis - tip);
  const int lo = static_cast<int>(std::floor((rel - half_width) / step)) - 1;
  const int hi = static_cast<int>(std::ceil((rel + half_width) / step)) + 1;
  for (int j = lo; j <= hi; ++j) {
    if (fn(((j % n) + n) % n)) return true;
  }
  return false;
}

}  // namespace

bool PairChecker::CollidesReference(Vec2 ca, double phi_a, Vec2 cb,
                                    double phi_b) const {
  const Frame fa = MakeFrame(ca, phi_a);
  const Frame fb = MakeFrame(cb, phi_b);
  for (int k = 0; k < n_; ++k) {
    if (Margin(BoundaryPoint(fa, k), fb) < -kInsideTolerance) return true;
  }
  for (int k = 0; k < n_; ++k) {
    if (Margin(BoundaryPoint(fb, k), fa) < -kInsideTolerance) return true;
  }
  return false;
}

bool PairChecker::Collides(Vec2 ca, double phi_a, Vec2 cb,
                           double phi_b) const {
  const Vec2 d = cb - ca;
  const double dist = d.norm();
  const double r = shape_.r_t + shape_.r_p;
  if (dist >= 2.0 * r) return false;
  // Below sqrt(2) R the lens of the two bounding disks is no longer confined
  // to the facing cones.
  if (dist < std::sqrt(2.0) * r) return CollidesReference(ca, phi_a, cb, phi_b);

  const double half = FacingHalfWidth(dist) + 1e-9;
  const double axis_ab = std::atan2(d.y, d.x);
  const double axis_ba = WrapAngle(axis_ab + kPi);
  const double tip_a = TipDirection(phi_a);
  const double tip_b = TipDirection(phi_b);
  if (dist >= ConeMaxRadius(tip_a, axis_ab, half) +
                  ConeMaxRadius(tip_b, axis_ba, half)) {
    return false;
  }
  const Frame fa = MakeFrame(ca, phi_a);
  const Frame fb = MakeFrame(cb, phi_b);
  if (AnyFacing(n_, tip_a, axis_ab, half, [&](int k) {
        return Margin(BoundaryPoint(fa, k), fb) < -kInsideTolerance;
      })) {
    return true;
  }
  return AnyFacing(n_, tip_b, axis_ba, half, [&](int k) {
    return Margin(BoundaryPoint(fb, k), fa) < -kInsideTolerance;
  });
}

double PairChecker::Clearance(Vec2 ca, double phi_a, Vec2 cb, double phi_b,
                              double horizon) const {
  const Vec2 d = cb - ca;
  const double dist = d.norm();
  const double r = shape_.r_t + shape_.r_p;
  const Frame fa = MakeFrame(ca, phi_a);
  const Frame fb = MakeFrame(cb, phi_b);
  double best = horizon;
  if (dist < std::sqrt(2.0) * r) {
    for (int k = 0; k < n_; ++k) {
      best = std::min(best, Margin(BoundaryPoint(fa, k), fb));
      best = std::min(best, Margin(BoundaryPoint(fb, k), fa));
    }
    return best;
  }
  const double half = FacingHalfWidth(dist) + 1e-9;
  const double axis_ab = std::atan2(d.y, d.x);
  const double axis_ba = WrapAngle(axis_ab + kPi);
  const double tip_a = TipDirection(phi_a);
  const double tip_b = TipDirection(phi_b);
  if (dist - ConeMaxRadius(tip_a, axis_ab, half) -
          ConeMaxRadius(tip_b, axis_ba, half) >=
      horizon) {
    return horizon;
  }
  AnyFacing(n_, tip_a, axis_ab, half, [&](int k) {
    best = std::min(best, Margin(BoundaryPoint(fa, k), fb));
    return false;
  });
  AnyFacing(n_, tip_b, axis_ba, half, [&](int k) {
    best = std::min(best, Margin(BoundaryPoint(fb, k), fa));
    return false;
  });
  return best;
}

bool PairCollides(double phi_a, double phi_b, Vec2 offset,
                  const TailShape& shape, int boundary_samples) {
  return PairChecker(shape, boundary_samples)
      .Collides({0.0, 0.0}, phi_a, offset, phi_b);
}

int CollisionGridSize(double resolution) {
  if (!(resolution > 0.0) || !(resolution <= 1.0)) {
    throw ParameterError("resolution must lie in (0, 1] rad");
  }
  int n = static_cast<int>(std::ceil(kTwoPi / resolution - 1e-9));
  if (n % 2 != 0) ++n;
  return std::max(n, 4);
}

CollisionSpace::CollisionSpace(Vec2 offset, double resolution, int n,
                               std::vector<std::uint8_t> cells)
    : offset_(offset), resolution_(resolution), n_(n), cells_(std::move(cells)) {
  if (cells_.size() != static_cast<std::size_t>(n_) * n_) {
    throw ParameterError("collision grid has the wrong number of cells");
  }
}

double CollisionSpace::Phi(int i) const {
  return -kPi + (i + 1) * (kTwoPi / n_);
}

int CollisionSpace::IndexOf(double phi) const {
  const double h = kTwoPi / n_;
  const int i = static_cast<int>(std::lround((WrapAngle(phi) + kPi) / h)) - 1;
  return ((i % n_) + n_) % n_;
}

std::size_t CollisionSpace::CollidingCount() const {
  return static_cast<std::size_t>(
      std::count(cells_.begin(), cells_.end(), std::uint8_t{1}));
}

int CollisionSpace::ComponentCount() const {
  std::vector<std::uint8_t> seen(cells_.size(), 0);
  int components = 0;
  for (int start = 0; start < n_ * n_; ++start) {
    const auto s = static_cast<std::size_t>(start);
    if (!cells_[s] || seen[s]) continue;
    ++components;
    std::queue<int> frontier;
    frontier.push(start);
    seen[s] = 1;
    while (!frontier.empty()) {
      const int c = frontier.front();
      frontier.pop();
      const int i1 = c % n_, i2 = c / n_;
      const int next[4][2] = {{(i1 + 1) % n_, i2},
                              {(i1 + n_ - 1) % n_, i2},
                              {i1, (i2 + 1) % n_},
                              {i1, (i2 + n_ - 1) % n_}};
      for (const auto& nb : next) {
        const auto id = static_cast<std::size_t>(nb[1] * n_ + nb[0]);
        if (cells_[id] && !seen[id]) {
          seen[id] = 1;
          frontier.push(nb[1] * n_ + nb[0]);
        }
      }
    }
  }
  return components;
}

void CollisionSpace::WriteCsv(std::ostream& os) const {
  os << "phi1,phi2,collide\n";
  char buf[96];
  for (int i2 = 0; i2 < n_; ++i2) {
    for (int i1 = 0; i1 < n_; ++i1) {
      std::snprintf(buf, sizeof(buf), "%.6f,%.6f,%d\n", Phi(i1), Phi(i2),
                    At(i1, i2) ? 1 : 0);
      os << buf;
    }
  }
}

void CollisionSpace::WritePgm(std::ostream& os) const {
  os << "P2\n" << n_ << ' ' << n_ << "\n255\n";
  for (int i2 = n_ - 1; i2 >= 0; --i2) {
    for (int i1 = 0; i1 < n_; ++i1) {
      os << (At(i1, i2) ? 0 : 255) << (i1 + 1 < n_ ? ' ' : '\n');
    }
  }
}

namespace {

template <bool kParallel>
CollisionSpace ComputeSpace(Vec2 offset, const TailShape& shape,
                            double resolution, int boundary_samples) {
  const int n = CollisionGridSize(resolution);
  const PairChecker checker(shape, boundary_samples);
  std::vector<std::uint8_t> cells(static_cast<std::size_t>(n) * n, 0);
  const double h = kTwoPi / n;
  const Vec2 origin{0.0, 0.0};
  if constexpr (kParallel) {
#pragma omp parallel for schedule(dynamic)
    for (int i2 = 0; i2 < n; ++i2) {
      const double phi2 = -kPi + (i2 + 1) * h;
      for (int i1 = 0; i1 < n; ++i1) {
        const double phi1 = -kPi + (i1 + 1) * h;
        cells[static_cast<std::size_t>(i2) * n + i1] =
            checker.Collides(origin, phi1, offset, phi2) ? 1 : 0;
      }
    }
  } else {
    for (int i2 = 0; i2 < n; ++i2) {
      const double phi2 = -kPi + (i2 + 1) * h;
      for (int i1 = 0; i1 < n; ++i1) {
        const double phi1 = -kPi + (i1 + 1) * h;
        cells[static_cast<std::size_t>(i2) * n + i1] =
            checker.CollidesReference(origin, phi1, offset, phi2) ? 1 : 0;
      }
    }
  }
  return CollisionSpace(offset, resolution, n, std::move(cells));
}

}  // namespace

CollisionSpace ComputeCollisionSpace(Vec2 offset, const TailShape& shape,
                                     double resolution, int boundary_samples) {
  return ComputeSpace<true>(offset, shape, resolution, boundary_samples);
}

CollisionSpace ComputeCollisionSpaceSerial(Vec2 offset, const TailShape& shape,
                                           double resolution,
                                           int boundary_samples) {
  return ComputeSpace<false>(offset, shape, resolution, boundary_samples);
}

namespace {

bool SegmentCollides(const PairChecker& checker, double gamma, Vec2 offset,
                     const GammaSearchOptions& options, double* contact) {
  const double limit = options.a_max / std::max(1.0, gamma);
  const int m = std::max(1, static_cast<int>(std::ceil(limit / options.resolution)));
  for (int j = 0; j <= m; ++j) {
    for (double sign : {1.0, -1.0}) {
      const double phi1 = sign * limit * j / m;
      if (checker.Collides({0.0, 0.0}, phi1, offset, gamma * phi1)) {
        if (contact) *contact = phi1;
        return true;
      }
    }
  }
  return false;
}

}  // namespace

bool WakeSegmentCollides(double gamma, const TailShape& shape,
                         const GammaSearchOptions& options,
                         double* contact_phi1) {
  const PairChecker checker(shape, options.boundary_samples);
  return SegmentCollides(checker, gamma, FrontBackOffset(shape), options,
                         contact_phi1);
}

GammaSearchResult MaxSafeGamma(const TailShape& shape,
                               const GammaSearchOptions& options) {
  if (!(options.resolution > 0.0) || !(options.coarse_step > 0.0) ||
      !(options.tolerance > 0.0) || !(options.gamma_cap > 1.0) ||
      !(options.a_max > 0.0)) {
    throw ParameterError("invalid gamma search options");
  }
  const PairChecker checker(shape, options.boundary_samples);
  const Vec2 offset = FrontBackOffset(shape);
  GammaSearchResult out;
  auto hits = [&](double g) {
    ++out.evaluations;
    return SegmentCollides(checker, g, offset, options, &out.contact_phi1);
  };
  if (hits(1.0)) {
    out.gamma_max = 1.0;
    out.constrained = true;
    return out;
  }
  double lo = 1.0;
  double hi = 0.0;
  const int steps =
      static_cast<int>(std::ceil((options.gamma_cap - 1.0) / options.coarse_step));
  for (int s = 1; s <= steps; ++s) {
    const double g = std::min(options.gamma_cap, 1.0 + s * options.coarse_step);
    if (hits(g)) {
      hi = g;
      break;
    }
    lo = g;
  }
  if (hi == 0.0) {
    out.gamma_max = options.gamma_cap;
    out.constrained = false;
    out.contact_phi1 = 0.0;
    return out;
  }
  while (hi - lo > options.tolerance) {
    const double mid = 0.5 * (lo + hi);
    if (hits(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  // Report the contact point of the first colliding gain.
  hits(hi);
  out.gamma_max = lo;
  out.constrained = true;
  return out;
}

}  // namespace flotilla
