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

#include "coopdet/preprocess/preprocess.hpp"

#include <stdexcept>

namespace coopdet {

PointCloud to_global(const PointCloud& pc, const RigidTransform& extrinsic,
                     int sensor_id) {
  if (pc.frame != CoordinateFrame::sensor ||
      (pc.source_sensor && *pc.source_sensor != sensor_id)) {
    throw std::invalid_argument("to_global: cloud is not in this sensor's frame");
  }
  PointCloud out;
  out.frame = CoordinateFrame::global;
  out.source_sensor = sensor_id;
  out.points.reserve(pc.points.size());
  for (const auto& p : pc.points) {
    out.points.push_back(extrinsic.apply(p));
  }
  return out;
}

PointCloud to_global(const PointCloud& pc, const SensorConfig& sensor) {
  return to_global(pc, sensor.extrinsic(), sensor.id);
}

PointCloud crop(const PointCloud& pc, const Rect& area, double height_cutoff) {
  if (pc.frame != CoordinateFrame::global) {
    throw std::invalid_argument("crop: cloud must be in the global frame");
  }
  PointCloud out;
  out.frame = CoordinateFrame::global;
  out.source_sensor = pc.source_sensor;
  out.points.reserve(pc.points.size());
  for (const auto& p : pc.points) {
    if (p.z() >= kCropFloorZ && p.z() <= height_cutoff && area.contains(p.x(), p.y())) {
      out.points.push_back(p);
    }
  }
  return out;
}

}  // namespace coopdet
