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

#ifndef COOPDET_PREPROCESS_PREPROCESS_HPP_
#define COOPDET_PREPROCESS_PREPROCESS_HPP_

#include "coopdet/pointcloud.hpp"
#include "coopdet/scene/scenario.hpp"

namespace coopdet {

/// Ground returns pushed slightly below z = 0 by sensor noise survive the
/// crop down to this floor.
inline constexpr double kCropFloorZ = -0.1;

/// Maps a sensor-frame cloud to the global frame with the sensor's
/// extrinsic. Throws std::invalid_argument when the cloud is not tagged with
/// this sensor's frame.
PointCloud to_global(const PointCloud& pc, const SensorConfig& sensor);

/// Same mapping with an explicit sensor-to-global transform.
PointCloud to_global(const PointCloud& pc, const RigidTransform& extrinsic, int sensor_id);

/// Keeps points with (x, y) inside the area (boundary inclusive) and
/// z in [kCropFloorZ, height_cutoff]; order preserved. The cloud must be in
/// the global frame.
PointCloud crop(const PointCloud& pc, const Rect& area, double height_cutoff);

}  // namespace coopdet

#endif  // COOPDET_PREPROCESS_PREPROCESS_HPP_
