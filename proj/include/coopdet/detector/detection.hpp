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

#ifndef COOPDET_DETECTOR_DETECTION_HPP_
#define COOPDET_DETECTOR_DETECTION_HPP_

#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "coopdet/geometry/types.hpp"

namespace coopdet {

/// One detected object: an oriented box plus the detector's confidence.
/// `source_sensor` names the sensor whose observation produced the box;
/// detections of a fused cloud carry none.
struct Detection {
  OrientedBox3 box;
  double score{0};
  std::optional<int> source_sensor;
};

/// Row of the detection text format:
///   frame_id sensor_id class cx cy cz l w h yaw score
/// sensor_id -1 stands for "no source sensor" (fused detections).
struct DetectionRecord {
  int frame_id{0};
  int sensor_id{-1};
  Detection detection;
};

void save_detections(const std::filesystem::path& path,
                     std::span<const DetectionRecord> records);

/// Returns the detections recorded for (frame_id, sensor_id), in file order.
/// Throws std::runtime_error naming the offending line on parse errors and
/// on scores outside [0, 1].
std::vector<Detection> load_external_detections(const std::filesystem::path& path,
                                                int frame_id, int sensor_id);

std::vector<DetectionRecord> load_detection_records(const std::filesystem::path& path);

}  // namespace coopdet

#endif  // COOPDET_DETECTOR_DETECTION_HPP_
