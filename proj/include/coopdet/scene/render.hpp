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

#ifndef COOPDET_SCENE_RENDER_HPP_
#define COOPDET_SCENE_RENDER_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "coopdet/geometry/pinhole.hpp"
#include "coopdet/pointcloud.hpp"
#include "coopdet/scene/scenario.hpp"
#include "coopdet/scene/simulate.hpp"

namespace coopdet {

/// Casts one ray per pixel and keeps the nearest of the object boxes and the
/// ground plane z = 0; pixels that hit nothing within max_range carry the
/// max_range sentinel. Depths are planar (camera z), so a fronto-parallel
/// wall renders at constant depth. Gaussian noise N(0, noise_sigma^2) is
/// added independently per hit pixel; sentinels stay noise free.
DepthImage render_depth(const SensorConfig& sensor,
                        std::span<const GroundTruthObject> objects,
                        std::uint64_t rng_seed, double noise_sigma,
                        double max_range);

/// Keeps every factor-th pixel per axis (stride sampling, no averaging).
/// Throws when the resolution is not divisible by the factor.
DepthImage downsample_depth(const DepthImage& image, int factor = 2);

/// Intrinsics matching a stride-downsampled image: f, cu and cv divide by
/// the factor, so surviving pixels back-project to identical rays.
CameraIntrinsics downsample_intrinsics(const CameraIntrinsics& intr, int factor = 2);

/// One simulation instant: per-sensor depth images (post noise, downsampled)
/// and the derived global-frame clouds, plus ground truth.
struct Frame {
  int frame_id{0};
  std::vector<DepthImage> depth_images;    // index aligned with scenario sensors
  std::vector<PointCloud> clouds_global;   // uncropped, global frame
  std::vector<GroundTruthObject> ground_truth;
};

/// Renders all configured sensors for one frame at full resolution, applies
/// noise, downsamples by `downsample_factor` and back-projects to global
/// clouds. Per-sensor noise streams derive from (seed, frame_id, sensor id).
Frame render_frame(const ScenarioConfig& config,
                   std::span<const GroundTruthObject> objects, int frame_id,
                   std::uint64_t seed, int downsample_factor = 2);

}  // namespace coopdet

#endif  // COOPDET_SCENE_RENDER_HPP_
