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

#ifndef COOPDET_DETECTOR_VOXEL_HPP_
#define COOPDET_DETECTOR_VOXEL_HPP_

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "coopdet/geometry/types.hpp"
#include "coopdet/pointcloud.hpp"
#include "coopdet/scene/scenario.hpp"

namespace coopdet {

/// Voxel grid used to structure a cloud before detection. The extent is the
/// detection-area rectangle times a height range.
struct VoxelGridSpec {
  Eigen::Vector3d voxel_size{0.2, 0.2, 0.4};
  int max_points_per_voxel{35};
  Rect area;
  double z_min{-0.4};
  double z_max{4.4};
};

/// Grid resolution matching the scenario's training setup: 0.2 m XY cells
/// for the T-junction, 0.4 m for the (three times larger) roundabout.
VoxelGridSpec default_voxel_spec(ScenarioName name, const Rect& area);

struct VoxelIndexHash {
  std::size_t operator()(const Eigen::Vector3i& v) const {
    std::uint64_t h = static_cast<std::uint32_t>(v.x());
    h = h * 0x9e3779b97f4a7c15ULL + static_cast<std::uint32_t>(v.y());
    h = h * 0x9e3779b97f4a7c15ULL + static_cast<std::uint32_t>(v.z());
    return static_cast<std::size_t>(h ^ (h >> 32));
  }
};

using VoxelMap = std::unordered_map<Eigen::Vector3i, std::vector<int>, VoxelIndexHash>;

/// Partitions the cloud into voxels by floor division (a point exactly on a
/// boundary belongs to the higher-index voxel). Voxels holding more than
/// max_points_per_voxel points are uniformly subsampled with the seeded
/// generator; empty voxels are absent. Values are indices into pc.points.
VoxelMap voxelize(const PointCloud& pc, const VoxelGridSpec& spec, std::uint64_t seed);

/// Detection anchors tiled over the area: one size, two orientations.
struct AnchorGridSpec {
  Eigen::Vector3d anchor_size{3.9, 1.6, 1.56};
  double stride{0.4};
  double center_z{1.0};
};

AnchorGridSpec default_anchor_spec(ScenarioName name);

/// Anchor boxes at XY positions i * stride covering the area, two boxes per
/// position (yaw 0 and pi/2), row-major over (y, x) with yaw 0 first.
std::vector<OrientedBox3> anchor_grid(const AnchorGridSpec& spec, const Rect& area);

}  // namespace coopdet

#endif  // COOPDET_DETECTOR_VOXEL_HPP_
