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

#ifndef COOPDET_GEOMETRY_PINHOLE_HPP_
#define COOPDET_GEOMETRY_PINHOLE_HPP_

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "coopdet/geometry/types.hpp"
#include "coopdet/pointcloud.hpp"

namespace coopdet {

/// Planar depth map: each value is the camera-frame z coordinate of the hit
/// surface, in meters. Values >= the producing sensor's max range are
/// no-return sentinels.
struct DepthImage {
  int width{0};
  int height{0};
  std::vector<double> data;

  DepthImage() = default;
  DepthImage(int w, int h, double fill = 0.0)
      : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {}

  double& at(int u, int v) { return data[static_cast<std::size_t>(v) * width + u]; }
  double at(int u, int v) const { return data[static_cast<std::size_t>(v) * width + u]; }
};

/// Camera frame convention: z forward (the depth axis), x right, y down.
/// Back-projects image coordinate (u, v) with planar depth d.
template <typename S>
Vec3<S> backproject_pixel(const CameraIntrinsicsT<S>& intr, S u, S v, S d) {
  return {(u - intr.cu) * d / intr.focal_length,
          (v - intr.cv) * d / intr.focal_length, d};
}

/// Projects a camera-frame point with z > 0 back to image coordinates and
/// planar depth.
template <typename S>
Vec3<S> project_point(const CameraIntrinsicsT<S>& intr, const Vec3<S>& p) {
  return {p.x() * intr.focal_length / p.z() + intr.cu,
          p.y() * intr.focal_length / p.z() + intr.cv, p.z()};
}

/// Back-projects every pixel with depth < max_range into a sensor-frame
/// cloud, row-major pixel order. Pixels at or beyond max_range are no-return
/// sentinels and are skipped.
inline PointCloud depth_to_pointcloud(const DepthImage& image,
                                      const CameraIntrinsics& intr,
                                      double max_range) {
  if (image.width != intr.width || image.height != intr.height) {
    throw std::invalid_argument("depth_to_pointcloud: image dimensions disagree with intrinsics");
  }
  PointCloud pc;
  pc.frame = CoordinateFrame::sensor;
  pc.points.reserve(image.data.size());
  for (int v = 0; v < image.height; ++v) {
    for (int u = 0; u < image.width; ++u) {
      const double d = image.at(u, v);
      if (!(d >= 0.0) || d >= max_range) continue;
      pc.points.push_back(backproject_pixel<double>(intr, u, v, d));
    }
  }
  return pc;
}

}  // namespace coopdet

#endif  // COOPDET_GEOMETRY_PINHOLE_HPP_
