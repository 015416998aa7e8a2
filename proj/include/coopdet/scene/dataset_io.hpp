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

#ifndef COOPDET_SCENE_DATASET_IO_HPP_
#define COOPDET_SCENE_DATASET_IO_HPP_

#include <filesystem>
#include <span>
#include <vector>

#include "coopdet/pointcloud.hpp"
#include "coopdet/scene/simulate.hpp"

namespace coopdet {

// Binary point-cloud format (little endian):
//   magic "CPPC", version u16, point count u32, then count * 3 float32
//   (x, y, z) in the global frame.
inline constexpr std::uint16_t kPointCloudFormatVersion = 1;

void save_pointcloud(const std::filesystem::path& path, const PointCloud& pc);
PointCloud load_pointcloud(const std::filesystem::path& path);

// Ground-truth text format, one object per line:
//   id class cx cy cz l w h yaw
// with class spelled out (car/cyclist/pedestrian) and yaw in radians.
void save_ground_truth(const std::filesystem::path& path,
                       std::span<const GroundTruthObject> objects);
std::vector<GroundTruthObject> load_ground_truth(const std::filesystem::path& path);

// Dataset directory layout: one directory per collection holding
// cloud_<frame>_s<sensor>.cppc and gt_<frame>.txt per frame, plus
// manifest.json with the generation parameters.
std::filesystem::path cloud_path(const std::filesystem::path& dir, int frame_id,
                                 int sensor_id);
std::filesystem::path ground_truth_path(const std::filesystem::path& dir, int frame_id);

}  // namespace coopdet

#endif  // COOPDET_SCENE_DATASET_IO_HPP_
