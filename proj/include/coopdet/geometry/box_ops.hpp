// Copyright 2026 the coopdet authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef COOPDET_GEOMETRY_BOX_OPS_HPP_
#define COOPDET_GEOMETRY_BOX_OPS_HPP_

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "coopdet/geometry/types.hpp"
#include "coopdet/pointcloud.hpp"

namespace coopdet {

/// The eight corners of a box. Corner i carries the sign pattern
/// (bit 0 -> +length/2, bit 1 -> +width/2, bit 2 -> +height/2) in the box
/// frame before the yaw rotation; corner 0 is (-l/2, -w/2, -h/2).
template <typename S>
std::array<Vec3<S>, 8> box_corners(const OrientedBox3T<S>& b) {
  const S c = std::cos(b.yaw);
  const S s = std::sin(b.yaw);
  const Vec3<S> half = b.size / S(2);
  std::array<Vec3<S>, 8> corners;
  for (int i = 0; i < 8; ++i) {
    const S lx = (i & 1) ? half.x() : -half.x();
    const S ly = (i & 2) ? half.y() : -half.y();
    const S lz = (i & 4) ? half.z() : -half.z();
    corners[i] = b.center + Vec3<S>(c * lx - s * ly, s * lx + c * ly, lz);
  }
  return corners;
}

/// Coordinates of a point expressed in the box frame (translate by -center,
/// rotate by -yaw).
template <typename S>
Vec3<S> to_box_frame(const OrientedBox3T<S>& b, const Vec3<S>& p) {
  const S c = std::cos(b.yaw);
  const S s = std::sin(b.yaw);
  const Vec3<S> d = p - b.center;
  return {c * d.x() + s * d.y(), -s * d.x() + c * d.y(), d.z()};
}

/// Boundary points count as inside.
template <typename S>
bool point_in_box(const OrientedBox3T<S>& b, const Vec3<S>& p) {
  const Vec3<S> q = to_box_frame(b, p);
  const Vec3<S> half = b.size / S(2);
  return std::abs(q.x()) <= half.x() && std::abs(q.y()) <= half.y() &&
         std::abs(q.z()) <= half.z();
}

inline std::vector<int> points_in_box(std::span<const Eigen::Vector3d> points,
                                      const OrientedBox3& b) {
  std::vector<int> inside;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (point_in_box(b, points[i])) inside.push_back(static_cast<int>(i));
  }
  return inside;
}

/// Indices of the cloud points inside the box. The cloud and the box must be
/// expressed in the same (global) frame.
inline std::vector<int> points_in_box(const PointCloud& pc, const OrientedBox3& b) {
  if (pc.frame != CoordinateFrame::global) {
    throw std::invalid_argument("points_in_box: cloud must be in the global frame");
  }
  return points_in_box(std::span<const Eigen::Vector3d>(pc.points), b);
}

/// Count-only variant for hot loops; same inclusion rule as points_in_box.
inline int count_points_in_box(std::span<const Eigen::Vector3d> points,
                               const OrientedBox3& b) {
  const double c = std::cos(b.yaw);
  const double s = std::sin(b.yaw);
  const double hl = b.size.x() / 2, hw = b.size.y() / 2, hh = b.size.z() / 2;
  // Radius of the BEV footprint, for a cheap reject before the rotation.
  const double r2 = hl * hl + hw * hw;
  int n = 0;
  for (const auto& p : points) {
    const double dz = p.z() - b.center.z();
    if (std::abs(dz) > hh) continue;
    const double dx = p.x() - b.center.x();
    const double dy = p.y() - b.center.y();
    if (dx * dx + dy * dy > r2) continue;
    const double bx = c * dx + s * dy;
    const double by = -s * dx + c * dy;
    if (std::abs(bx) <= hl && std::abs(by) <= hw) ++n;
  }
  return n;
}

inline int count_points_in_box(const PointCloud& pc, const OrientedBox3& b) {
  return count_points_in_box(std::span<const Eigen::Vector3d>(pc.points), b);
}

namespace detail {

/// Slab test in the box frame. Works for any nonzero direction; the returned
/// parameter is in units of |direction|.
template <typename S>
std::optional<S> ray_box_param(const OrientedBox3T<S>& b, const Vec3<S>& origin,
                               const Vec3<S>& direction) {
  const Vec3<S> o = to_box_frame(b, origin);
  const S c = std::cos(b.yaw);
  const S s = std::sin(b.yaw);
  const Vec3<S> d(c * direction.x() + s * direction.y(),
                  -s * direction.x() + c * direction.y(), direction.z());
  const Vec3<S> half = b.size / S(2);

  S t0 = -std::numeric_limits<S>::infinity();
  S t1 = std::numeric_limits<S>::infinity();
  for (int axis = 0; axis < 3; ++axis) {
    if (d[axis] == S(0)) {
      if (std::abs(o[axis]) > half[axis]) return std::nullopt;
      continue;
    }
    S near = (-half[axis] - o[axis]) / d[axis];
    S far = (half[axis] - o[axis]) / d[axis];
    if (near > far) std::swap(near, far);
    t0 = std::max(t0, near);
    t1 = std::min(t1, far);
    if (t0 > t1) return std::nullopt;
  }
  if (t1 < S(0)) return std::nullopt;
  return t0 > S(0) ? t0 : t1;
}

}  // namespace detail

/// Nearest intersection distance of a ray with a box, or nullopt when the ray
/// misses or the box lies behind the origin. `direction` must be unit length.
template <typename S>
std::optional<S> ray_box_intersect(const Vec3<S>& origin, const Vec3<S>& direction,
                                   const OrientedBox3T<S>& b) {
  return detail::ray_box_param(b, origin, direction);
}

}  // namespace coopdet

#endif  // COOPDET_GEOMETRY_BOX_OPS_HPP_
