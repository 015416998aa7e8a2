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

#ifndef COOPDET_SCENE_SCENARIO_HPP_
#define COOPDET_SCENE_SCENARIO_HPP_

#include <array>
#include <string>
#include <vector>

#include "coopdet/geometry/types.hpp"

namespace coopdet {

/// Camera-to-global pose for a camera at (x, y, height) with heading `yaw`
/// (global XY plane, radians) tilted down by `pitch` (radians). The camera
/// frame is z forward, x right, y down; roll is always zero.
RigidTransform sensor_pose(double x, double y, double height, double yaw, double pitch);

/// One fixed infrastructure sensor: pinhole depth camera on a post. The
/// pose parameters are the authoritative (config-file) data; the extrinsic
/// sensor-to-global transform is derived from them.
struct SensorConfig {
  int id{0};
  CameraIntrinsics intrinsics;
  double x{0}, y{0};  // post position, global frame
  double yaw_deg{0};
  double pitch_deg{0};  // downward tilt
  double mount_height{0};

  RigidTransform extrinsic() const;
  Eigen::Vector2d position_xy() const { return {x, y}; }
};

/// Piecewise-linear path followed by moving objects. Vehicle paths carry
/// cars and cyclists; pedestrian paths carry pedestrians. Open paths clamp
/// at their last vertex, loops wrap.
struct LanePath {
  std::vector<Eigen::Vector2d> waypoints;
  bool loop{false};
  bool pedestrian{false};

  double length() const;
  /// Position and heading at arc length s (clamped or wrapped).
  void sample(double s, Eigen::Vector2d* position, double* heading) const;
};

enum class ScenarioName { t_junction, roundabout, custom };

std::string to_string(ScenarioName name);

struct ScenarioConfig {
  ScenarioName name{ScenarioName::custom};
  Rect detection_area;
  std::vector<SensorConfig> sensors;
  int max_objects{30};
  std::array<double, 3> spawn_probabilities{0.6, 0.2, 0.2};  // car, cyclist, pedestrian
  int object_lifespan_frames{4};
  double noise_sigma{0.015};
  double height_cutoff{4.0};
  double max_range{120.0};  // no-return sentinel depth
  std::vector<LanePath> lanes;

  /// Throws std::invalid_argument on an unusable configuration.
  void validate() const;
};

/// Built-in scenario geometry. The T-junction uses six sensors on 5.2 m
/// posts over an 80 x 40 m detection area; the roundabout uses eight sensors
/// on 8 m posts over 96 x 96 m. Throws on ScenarioName::custom (custom
/// scenarios come from a config file).
ScenarioConfig build_scenario(ScenarioName name);

/// Per-class size ranges (length, width, height), meters.
struct SizeRange {
  Eigen::Vector3d min;
  Eigen::Vector3d max;
};
const SizeRange& object_size_range(ObjectClass cls);

/// Constant motion speed per class, m/s.
double object_speed(ObjectClass cls);

/// Simulation tick between consecutive frames, seconds.
inline constexpr double kFrameDt = 0.1;

}  // namespace coopdet

#endif  // COOPDET_SCENE_SCENARIO_HPP_
