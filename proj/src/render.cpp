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

#include "coopdet/scene/render.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "coopdet/geometry/box_ops.hpp"
#include "coopdet/random.hpp"

namespace coopdet {

namespace {

struct PixelRect {
  int u0, u1, v0, v1;  // inclusive
  bool empty() const { return u0 > u1 || v0 > v1; }
};

// Conservative pixel bounding rectangle of a box silhouette. Corners at or
// behind the camera plane fall back to the full image.
PixelRect project_bbox(const SensorConfig& sensor, const RigidTransform& extrinsic,
                       const OrientedBox3& box) {
  const RigidTransform to_camera = extrinsic.inverse();
  const CameraIntrinsics& intr = sensor.intrinsics;
  double umin = std::numeric_limits<double>::infinity(), umax = -umin;
  double vmin = umin, vmax = -umin;
  bool clipped = false;
  for (const auto& corner : box_corners(box)) {
    const Eigen::Vector3d c = to_camera.apply(corner);
    if (c.z() <= 1e-9) {
      clipped = true;
      break;
    }
    const Eigen::Vector3d px = project_point(intr, c);
    umin = std::min(umin, px.x());
    umax = std::max(umax, px.x());
    vmin = std::min(vmin, px.y());
    vmax = std::max(vmax, px.y());
  }
  PixelRect r;
  if (clipped) {
    r = {0, intr.width - 1, 0, intr.height - 1};
  } else {
    r.u0 = std::max(0, static_cast<int>(std::floor(umin)) - 1);
    r.u1 = std::min(intr.width - 1, static_cast<int>(std::ceil(umax)) + 1);
    r.v0 = std::max(0, static_cast<int>(std::floor(vmin)) - 1);
    r.v1 = std::min(intr.height - 1, static_cast<int>(std::ceil(vmax)) + 1);
  }
  return r;
}

// Slab test with the box-frame origin precomputed. `direction` is in the
// planar-depth parametrisation (camera z component 1), so the returned
// parameter is the planar depth of the hit.
struct BoxRayTester {
  double cos_yaw, sin_yaw;
  Eigen::Vector3d origin_box;
  Eigen::Vector3d half;

  explicit BoxRayTester(const OrientedBox3& b, const Eigen::Vector3d& origin)
      : cos_yaw(std::cos(b.yaw)), sin_yaw(std::sin(b.yaw)), half(b.size / 2) {
    const Eigen::Vector3d d = origin - b.center;
    origin_box = {cos_yaw * d.x() + sin_yaw * d.y(),
                  -sin_yaw * d.x() + cos_yaw * d.y(), d.z()};
  }

  double hit(const Eigen::Vector3d& dir) const {
    const Eigen::Vector3d d(cos_yaw * dir.x() + sin_yaw * dir.y(),
                            -sin_yaw * dir.x() + cos_yaw * dir.y(), dir.z());
    double t0 = 0.0;
    double t1 = std::numeric_limits<double>::infinity();
    for (int axis = 0; axis < 3; ++axis) {
      if (d[axis] == 0.0) {
        if (std::abs(origin_box[axis]) > half[axis]) return -1.0;
        continue;
      }
      double near = (-half[axis] - origin_box[axis]) / d[axis];
      double far = (half[axis] - origin_box[axis]) / d[axis];
      if (near > far) std::swap(near, far);
      t0 = std::max(t0, near);
      t1 = std::min(t1, far);
      if (t0 > t1) return -1.0;
    }
    return t0;
  }
};

}  // namespace

DepthImage render_depth(const SensorConfig& sensor,
                        std::span<const GroundTruthObject> objects,
                        std::uint64_t rng_seed, double noise_sigma,
                        double max_range) {
  const CameraIntrinsics& intr = sensor.intrinsics;
  if (!intr.valid()) throw std::invalid_argument("render_depth: bad intrinsics");
  DepthImage image(intr.width, intr.height, max_range);

  const RigidTransform extrinsic = sensor.extrinsic();
  const Eigen::Matrix3d& rot = extrinsic.rotation;
  const Eigen::Vector3d origin = extrinsic.translation;
  const double inv_f = 1.0 / intr.focal_length;

  auto ray_direction = [&](int u, int v) {
    // Planar-depth parametrisation: camera-frame z component is 1.
    return Eigen::Vector3d(rot.col(0) * ((u - intr.cu) * inv_f) +
                           rot.col(1) * ((v - intr.cv) * inv_f) + rot.col(2));
  };

  // Ground plane z = 0.
  for (int v = 0; v < intr.height; ++v) {
    const Eigen::Vector3d row_part = rot.col(1) * ((v - intr.cv) * inv_f) + rot.col(2);
    for (int u = 0; u < intr.width; ++u) {
      const Eigen::Vector3d g = rot.col(0) * ((u - intr.cu) * inv_f) + row_part;
      if (g.z() < 0.0) {
        const double t = -origin.z() / g.z();
        if (t < image.at(u, v)) image.at(u, v) = t;
      }
    }
  }

  // Object boxes, nearest hit wins.
  for (const auto& obj : objects) {
    const PixelRect rect = project_bbox(sensor, extrinsic, obj.box);
    if (rect.empty()) continue;
    const BoxRayTester tester(obj.box, origin);
    for (int v = rect.v0; v <= rect.v1; ++v) {
      for (int u = rect.u0; u <= rect.u1; ++u) {
        const double t = tester.hit(ray_direction(u, v));
        if (t > 0.0 && t < image.at(u, v)) image.at(u, v) = t;
      }
    }
  }

  // Measurement noise on actual returns only; sentinels stay clean.
  if (noise_sigma > 0.0) {
    auto rng = make_rng(rng_seed);
    std::normal_distribution<double> noise(0.0, noise_sigma);
    for (double& d : image.data) {
      if (d < max_range) d = std::max(0.0, d + noise(rng));
    }
  }
  return image;
}

DepthImage downsample_depth(const DepthImage& image, int factor) {
  if (factor < 1) throw std::invalid_argument("downsample_depth: factor must be >= 1");
  if (image.width % factor != 0 || image.height % factor != 0) {
    throw std::invalid_argument("downsample_depth: resolution not divisible by factor");
  }
  DepthImage out(image.width / factor, image.height / factor);
  for (int v = 0; v < out.height; ++v) {
    for (int u = 0; u < out.width; ++u) {
      out.at(u, v) = image.at(u * factor, v * factor);
    }
  }
  return out;
}

CameraIntrinsics downsample_intrinsics(const CameraIntrinsics& intr, int factor) {
  if (factor < 1) throw std::invalid_argument("downsample_intrinsics: factor must be >= 1");
  if (intr.width % factor != 0 || intr.height % factor != 0) {
    throw std::invalid_argument("downsample_intrinsics: resolution not divisible by factor");
  }
  CameraIntrinsics out = intr;
  out.focal_length /= factor;
  out.cu /= factor;
  out.cv /= factor;
  out.width /= factor;
  out.height /= factor;
  return out;
}

Frame render_frame(const ScenarioConfig& config,
                   std::span<const GroundTruthObject> objects, int frame_id,
                   std::uint64_t seed, int downsample_factor) {
  Frame frame;
  frame.frame_id = frame_id;
  frame.ground_truth.assign(objects.begin(), objects.end());
  frame.depth_images.reserve(config.sensors.size());
  frame.clouds_global.reserve(config.sensors.size());
  for (const auto& sensor : config.sensors) {
    const std::uint64_t stream =
        seed_for(seed, kRenderDomain, static_cast<std::uint64_t>(frame_id),
                 static_cast<std::uint64_t>(sensor.id));
    DepthImage full = render_depth(sensor, objects, stream, config.noise_sigma,
                                   config.max_range);
    DepthImage small = downsample_depth(full, downsample_factor);
    const CameraIntrinsics small_intr =
        downsample_intrinsics(sensor.intrinsics, downsample_factor);
    PointCloud cloud = depth_to_pointcloud(small, small_intr, config.max_range);
    const RigidTransform extrinsic = sensor.extrinsic();
    for (auto& p : cloud.points) p = extrinsic.apply(p);
    cloud.frame = CoordinateFrame::global;
    cloud.source_sensor = sensor.id;
    frame.depth_images.push_back(std::move(small));
    frame.clouds_global.push_back(std::move(cloud));
  }
  return frame;
}

}  // namespace coopdet
