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

// Tail geometry, pairwise tail intersection, the (phi1, phi2) collision
// space of two docked neighbors, and the largest safe wake gain.
//
// Angles: a module's tail angle phi is measured counter-clockwise in the
// configuration body frame from the rearward direction, so the tail tip
// points along -pi/2 + phi. A module's outline is the closed polar curve
//   r(theta) = max(0, r_t + r_p (1 - |wrap(theta - tip)| / theta_w)).

#ifndef FLOTILLA_COLLISION_HPP_
#define FLOTILLA_COLLISION_HPP_

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "flotilla/angles.hpp"

namespace flotilla {

struct TailShape {
  double r_t = 0.0762;    // m, top-body radius
  double r_p = 0.015;     // m, tip protrusion
  double theta_w = 0.62;  // rad, protrusion half-width

  // Throws ParameterError unless 0 < r_t, 0 <= r_p < r_t and
  // 0 < theta_w < pi.
  void Validate() const;
};

inline double TipDirection(double phi) { return -kPi / 2.0 + phi; }

// Outline radius at polar angle theta for a tail whose tip points along
// `tip`.
double TailRadius(double theta, double tip, const TailShape& shape);

inline constexpr int kDefaultBoundarySamples = 1440;
inline constexpr double kInsideTolerance = 1e-6;  // m

// Point-sampled intersection tests between two outlines. Boundary sample k
// of an outline sits at polar angle tip + 2 pi k / n, so the tip itself is
// always sampled. Two outlines collide iff a boundary sample of either lies
// strictly inside the other (by more than kInsideTolerance).
class PairChecker {
 public:
  explicit PairChecker(TailShape shape,
                       int boundary_samples = kDefaultBoundarySamples);

  const TailShape& shape() const { return shape_; }
  int boundary_samples() const { return n_; }

  // Tests every boundary sample of both outlines.
  bool CollidesReference(Vec2 ca, double phi_a, Vec2 cb, double phi_b) const;

  // Same answer as CollidesReference. Only samples facing the other module
  // can lie inside it, so once the centers are at least sqrt(2) (r_t + r_p)
  // apart only those are tested, after a bound on the facing radii.
  bool Collides(Vec2 ca, double phi_a, Vec2 cb, double phi_b) const;

  // Smallest radial margin |p - c_other| - r_other over the facing samples
  // of both outlines, capped at `horizon`. Negative on overlap.
  double Clearance(Vec2 ca, double phi_a, Vec2 cb, double phi_b,
                   double horizon) const;

  // Upper bound on the outline radius within `half_width` of `axis`.
  double ConeMaxRadius(double tip, double axis, double half_width) const;

 private:
  struct Frame {
    Vec2 center;
    double cos_tip = 1.0;
    double sin_tip = 0.0;
  };
  static Frame MakeFrame(Vec2 center, double phi);
  Vec2 BoundaryPoint(const Frame& f, int k) const;
  // Signed radial margin of p against the outline in frame f.
  double Margin(Vec2 p, const Frame& f) const;
  double FacingHalfWidth(double distance) const;

  TailShape shape_;
  int n_;
  std::vector<double> radius_;  // by sample index
  std::vector<double> cos_u_;
  std::vector<double> sin_u_;
};

// Convenience wrapper: module a at the origin, module b at `offset`.
bool PairCollides(double phi_a, double phi_b, Vec2 offset,
                  const TailShape& shape,
                  int boundary_samples = kDefaultBoundarySamples);

// Offsets of the two neighbor types for a lattice of pitch 2 r_t: b directly
// behind a, and b directly to the right of a.
inline Vec2 FrontBackOffset(const TailShape& s) { return {0.0, -2.0 * s.r_t}; }
inline Vec2 SideBySideOffset(const TailShape& s) { return {2.0 * s.r_t, 0.0}; }

// Boolean grid over (phi1, phi2) in (-pi, pi]^2 for module 1 at the origin
// and module 2 at `offset`. Grid values are phi_i = -pi + (i + 1) h with
// h = 2 pi / n and n even, so 0 and pi are grid points.
class CollisionSpace {
 public:
  CollisionSpace(Vec2 offset, double resolution, int n,
                 std::vector<std::uint8_t> cells);

  Vec2 offset() const { return offset_; }
  double resolution() const { return resolution_; }
  int size() const { return n_; }
  double Phi(int i) const;
  // Index of the grid value nearest to phi (wrapped).
  int IndexOf(double phi) const;

  bool At(int i1, int i2) const {
    return cells_[static_cast<std::size_t>(i2) * n_ + i1] != 0;
  }
  bool Query(double phi1, double phi2) const {
    return At(IndexOf(phi1), IndexOf(phi2));
  }
  std::size_t CollidingCount() const;
  // 4-connected components of the colliding set with periodic wrap in
  // both angles.
  int ComponentCount() const;

  // CSV rows "phi1,phi2,collide" with phi1 fastest.
  void WriteCsv(std::ostream& os) const;
  // Plain graymap: phi1 left to right, phi2 from pi at the top; colliding
  // cells are black.
  void WritePgm(std::ostream& os) const;

  friend bool operator==(const CollisionSpace& a, const CollisionSpace& b) {
    return a.n_ == b.n_ && a.cells_ == b.cells_;
  }

 private:
  Vec2 offset_;
  double resolution_;
  int n_;
  std::vector<std::uint8_t> cells_;  // row-major, row = phi2 index
};

int CollisionGridSize(double resolution);

// OpenMP over phi2 rows.
CollisionSpace ComputeCollisionSpace(
    Vec2 offset, const TailShape& shape, double resolution,
    int boundary_samples = kDefaultBoundarySamples);
// Single-threaded reference using the exhaustive pair test.
CollisionSpace ComputeCollisionSpaceSerial(
    Vec2 offset, const TailShape& shape, double resolution,
    int boundary_samples = kDefaultBoundarySamples);

struct GammaSearchOptions {
  double resolution = 0.01;   // rad, spacing of samples along the segment
  double a_max = 2.5;         // rad, amplitude bound of the rear module
  double gamma_cap = 10.0;    // search limit
  double coarse_step = 0.05;  // sweep step before bisection
  double tolerance = 1e-4;    // bisection width
  int boundary_samples = kDefaultBoundarySamples;
};

struct GammaSearchResult {
  double gamma_max = 0.0;
  bool constrained = false;  // false: no collision up to gamma_cap
  double contact_phi1 = 0.0;  // first contact on the segment, if any
  int evaluations = 0;
};

// True if some phi1 in [-L, L], L = a_max / max(1, gamma), puts the
// front-back pair in contact at phi2 = gamma phi1.
bool WakeSegmentCollides(double gamma, const TailShape& shape,
                         const GammaSearchOptions& options,
                         double* contact_phi1 = nullptr);

// Largest gamma whose segment phi2 = gamma phi1 stays clear: a sweep from
// gamma = 1 to the first colliding step, then bisection.
GammaSearchResult MaxSafeGamma(const TailShape& shape,
                               const GammaSearchOptions& options = {});

}  // namespace flotilla

#endif  // FLOTILLA_COLLISION_HPP_
