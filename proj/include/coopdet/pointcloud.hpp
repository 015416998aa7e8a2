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

#ifndef COOPDET_POINTCLOUD_HPP_
#define COOPDET_POINTCLOUD_HPP_

#include <optional>
#include <vector>

#include "coopdet/geometry/types.hpp"

namespace coopdet {

enum class CoordinateFrame { sensor, global };

/// A set of 3D points tagged with the frame they live in. `source_sensor` is
/// kept for provenance; a fused cloud has none.
struct PointCloud {
  std::vector<Eigen::Vector3d> points;
  CoordinateFrame frame{CoordinateFrame::global};
  std::optional<int> source_sensor;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }

  bool all_finite() const {
    for (const auto& p : points) {
      if (!p.allFinite()) return false;
    }
    return true;
  }
};

}  // namespace coopdet

#endif  // COOPDET_POINTCLOUD_HPP_
