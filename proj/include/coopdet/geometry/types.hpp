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

#ifndef COOPDET_GEOMETRY_TYPES_HPP_
#define COOPDET_GEOMETRY_TYPES_HPP_

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string_view>

namespace coopdet {

template <typename S>
using Vec2 = Eigen::Matrix<S, 2, 1>;
template <typename S>
using Vec3 = Eigen::Matrix<S, 3, 1>;
template <typename S>
using Mat3 = Eigen::Matrix<S, 3, 3>;

enum class ObjectClass : std::uint8_t { car = 0, cyclist = 1, pedestrian = 2 };

constexpr std::string_view to_string(ObjectClass c) {
  switch (c) {
    case ObjectClass::car: return "car";
    case ObjectClass::cyclist: return "cyclist";
    case ObjectClass::pedestrian: return "pedestrian";
  }
  return "car";
}

inline std::optional<ObjectClass> object_class_from_string(std::string_view s) {
  if (s == "car") return ObjectClass::car;
  if (s == "cyclist") return ObjectClass::cyclist;
  if (s == "pedestrian") return ObjectClass::pedestrian;
  return std::nullopt;
}

/// Wraps an angle to the canonical yaw interval [-pi, pi).
template <typename S>
S normalize_yaw(S yaw) {
  constexpr S two_pi = static_cast<S>(2) * std::numbers::pi_v<S>;
  S y = std::fmod(yaw + std::numbers::pi_v<S>, two_pi);
  if (y < S(0)) y += two_pi;
  y -= std::numbers::pi_v<S>;
  // fmod can land exactly on +pi for inputs just below the wrap point.
  if (y >= std::numbers::pi_v<S>) y -= two_pi;
  return y;
}

/// Axis-aligned rectangle in the global XY plane. Boundary points count as
/// inside.
template <typename S>
struct RectT {
  Vec2<S> min{Vec2<S>::Zero()};
  Vec2<S> max{Vec2<S>::Zero()};

  static RectT centered(S width, S height) {
    return {Vec2<S>(-width / 2, -height / 2), Vec2<S>(width / 2, height / 2)};
  }

  S width() const { return max.x() - min.x(); }
  S height() const { return max.y() - min.y(); }
  S area() const { return width() * height(); }
  bool degenerate() const { return width() <= S(0) || height() <= S(0); }

  bool contains(S x, S y) const {
    return x >= min.x() && x <= max.x() && y >= min.y() && y <= max.y();
  }
  bool contains(const Vec2<S>& p) const { return contains(p.x(), p.y()); }
};

using Rect = RectT<double>;

/// Proper rigid motion: p -> rotation * p + translation. For a sensor this
/// stores the sensor-to-global map, i.e. the inverse of the extrinsic matrix.
template <typename S>
struct RigidTransformT {
  Mat3<S> rotation{Mat3<S>::Identity()};
  Vec3<S> translation{Vec3<S>::Zero()};

  static RigidTransformT identity() { return {}; }

  Vec3<S> apply(const Vec3<S>& p) const { return rotation * p + translation; }

  /// Rotates a direction vector (no translation).
  Vec3<S> apply_direction(const Vec3<S>& d) const { return rotation * d; }

  RigidTransformT inverse() const {
    RigidTransformT inv;
    inv.rotation = rotation.transpose();
    inv.translation = -(rotation.transpose() * translation);
    return inv;
  }

  /// Composition: (this ∘ other), apply `other` first.
  RigidTransformT compose(const RigidTransformT& other) const {
    RigidTransformT out;
    out.rotation = rotation * other.rotation;
    out.translation = rotation * other.translation + translation;
    return out;
  }

  /// True iff rotation is orthonormal with determinant +1.
  bool is_rigid(S tol = static_cast<S>(1e-9)) const {
    const Mat3<S> should_be_identity = rotation.transpose() * rotation;
    return (should_be_identity - Mat3<S>::Identity()).cwiseAbs().maxCoeff() <= tol &&
           std::abs(rotation.determinant() - S(1)) <= tol;
  }
};

using RigidTransform = RigidTransformT<double>;

template <typename S>
Vec3<S> transform_point(const RigidTransformT<S>& t, const Vec3<S>& p) {
  return t.apply(p);
}

/// 3D box with yaw-only orientation (rotation about the global z axis).
/// size = (length, width, height); length lies along the box x axis at yaw 0.
template <typename S>
struct OrientedBox3T {
  Vec3<S> center{Vec3<S>::Zero()};
  Vec3<S> size{Vec3<S>::Ones()};
  S yaw{0};
  ObjectClass cls{ObjectClass::car};

  S length() const { return size.x(); }
  S width() const { return size.y(); }
  S height() const { return size.z(); }
  S volume() const { return size.prod(); }
  S bottom_z() const { return center.z() - size.z() / 2; }
  S top_z() const { return center.z() + size.z() / 2; }

  bool valid() const {
    return size.minCoeff() > S(0) && center.allFinite() &&
           yaw >= -std::numbers::pi_v<S> && yaw < std::numbers::pi_v<S>;
  }

  static OrientedBox3T make(const Vec3<S>& center, const Vec3<S>& size, S yaw,
                            ObjectClass cls = ObjectClass::car) {
    return {center, size, normalize_yaw(yaw), cls};
  }
};

using OrientedBox3 = OrientedBox3T<double>;

/// Pinhole intrinsics. Pixel (i, j) is identified with the continuous image
/// coordinate (u, v) = (i, j), so stride-downsampling an image and dividing
/// the intrinsics by the same factor back-projects the surviving pixels to
/// identical rays.
template <typename S>
struct CameraIntrinsicsT {
  S focal_length{1};   // pixels
  S cu{0}, cv{0};      // principal point, pixels
  int width{0}, height{0};
  S horizontal_fov_deg{0};  // derived from focal_length/width, kept for validation

  static CameraIntrinsicsT from_fov(int width, int height, S hfov_deg) {
    CameraIntrinsicsT intr;
    intr.width = width;
    intr.height = height;
    intr.horizontal_fov_deg = hfov_deg;
    const S half = hfov_deg * std::numbers::pi_v<S> / S(360);
    intr.focal_length = static_cast<S>(width) / (S(2) * std::tan(half));
    intr.cu = static_cast<S>(width) / S(2);
    intr.cv = static_cast<S>(height) / S(2);
    return intr;
  }

  S fov_from_focal() const {
    return S(2) * std::atan(static_cast<S>(width) / (S(2) * focal_length)) *
           S(180) / std::numbers::pi_v<S>;
  }

  bool valid(S fov_tol_deg = static_cast<S>(0.1)) const {
    return focal_length > S(0) && width > 0 && height > 0 && cu >= S(0) &&
           cu < static_cast<S>(width) && cv >= S(0) && cv < static_cast<S>(height) &&
           std::abs(fov_from_focal() - horizontal_fov_deg) <= fov_tol_deg;
  }
};

using CameraIntrinsics = CameraIntrinsicsT<double>;

}  // namespace coopdet

#endif  // COOPDET_GEOMETRY_TYPES_HPP_
