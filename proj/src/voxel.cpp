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

#include "coopdet/detector/voxel.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "coopdet/random.hpp"

namespace coopdet {

VoxelGridSpec default_voxel_spec(ScenarioName name, const Rect& area) {
  VoxelGridSpec spec;
  spec.area = area;
  spec.voxel_size = name == ScenarioName::roundabout
                        ? Eigen::Vector3d(0.4, 0.4, 0.4)
                        : Eigen::Vector3d(0.2, 0.2, 0.4);
  return spec;
}

VoxelMap voxelize(const PointCloud& pc, const VoxelGridSpec& spec, std::uint64_t seed) {
  VoxelMap map;
  for (std::size_t i = 0; i < pc.points.size(); ++i) {
    const auto& p = pc.points[i];
    const Eigen::Vector3i idx(
        static_cast<int>(std::floor((p.x() - spec.area.min.x()) / spec.voxel_size.x())),
        static_cast<int>(std::floor((p.y() - spec.area.min.y()) / spec.voxel_size.y())),
        static_cast<int>(std::floor((p.z() - spec.z_min) / spec.voxel_size.z())));
    map[idx].push_back(static_cast<int>(i));
  }

  // Uniform subsample of crowded voxels: partial Fisher-Yates, seeded per
  // voxel so iteration order of the map cannot matter.
  for (auto& [idx, indices] : map) {
    const int t = spec.max_points_per_voxel;
    if (static_cast<int>(indices.size()) <= t) continue;
    auto rng = make_rng(seed_for(seed, kVoxelDomain, static_cast<std::uint64_t>(idx.x()),
                                 static_cast<std::uint64_t>(idx.y()),
                                 static_cast<std::uint64_t>(idx.z())));
    for (int k = 0; k < t; ++k) {
      std::uniform_int_distribution<int> pick(k, static_cast<int>(indices.size()) - 1);
      std::swap(indices[k], indices[pick(rng)]);
    }
    indices.resize(t);
  }
  return map;
}

AnchorGridSpec default_anchor_spec(ScenarioName name) {
  AnchorGridSpec spec;
  spec.stride = name == ScenarioName::roundabout ? 0.8 : 0.4;
  return spec;
}

std::vector<OrientedBox3> anchor_grid(const AnchorGridSpec& spec, const Rect& area) {
  const int nx = std::max(1, static_cast<int>(std::ceil(area.width() / spec.stride)));
  const int ny = std::max(1, static_cast<int>(std::ceil(area.height() / spec.stride)));
  std::vector<OrientedBox3> anchors;
  anchors.reserve(static_cast<std::size_t>(nx) * ny * 2);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const Eigen::Vector3d center(area.min.x() + (i + 0.5) * spec.stride,
                                   area.min.y() + (j + 0.5) * spec.stride,
                                   spec.center_z);
      anchors.push_back(OrientedBox3::make(center, spec.anchor_size, 0.0));
      anchors.push_back(OrientedBox3::make(center, spec.anchor_size,
                                           std::numbers::pi / 2));
    }
  }
  return anchors;
}

}  // namespace coopdet
