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

#include "coopdet/scene/scenario.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace coopdet {

namespace {

constexpr double deg(double d) { return d * std::numbers::pi / 180.0; }

struct PoseEntry {
  double x, y, yaw_deg, pitch_deg;
};

SensorConfig make_sensor(int id, const PoseEntry& pose, double height,
                         const CameraIntrinsics& intr) {
  SensorConfig s;
  s.id = id;
  s.intrinsics = intr;
  s.x = pose.x;
  s.y = pose.y;
  s.yaw_deg = pose.yaw_deg;
  s.pitch_deg = pose.pitch_deg;
  s.mount_height = height;
  return s;
}

// T-junction: main road along x, stem road leaving south. Posts sit at the
// area ends looking inward plus two mid-block posts per side of the stem,
// chosen so the whole detection area is covered with overlapping
// fields of view. Poses are tuned layout data, not measurements.
constexpr PoseEntry kTJunctionPoses[6] = {
    {-38.0, 6.0, -15.0, 25.0},   // west end, looking east along the road
    {38.0, -6.0, 165.0, 25.0},   // east end, looking west
    {-2.0, -19.0, 90.0, 25.0},   // stem end, looking north at the junction
    {2.0, 18.0, -90.0, 25.0},    // north side, looking south down the stem
    {-20.0, 16.0, -160.0, 30.0}, // mid west, close-up of the west arm
    {20.0, 16.0, -20.0, 30.0},   // mid east, close-up of the east arm
};

// Roundabout: four mid-edge posts aiming at the centre and four corner
// posts aiming across, eight overlapping views of the 96 x 96 m square.
constexpr PoseEntry kRoundaboutPoses[8] = {
    {46.0, 2.0, 180.0, 30.0},
    {-2.0, 46.0, -90.0, 30.0},
    {-46.0, -2.0, 0.0, 30.0},
    {2.0, -46.0, 90.0, 30.0},
    {44.0, 44.0, -135.0, 30.0},
    {-44.0, 44.0, -45.0, 30.0},
    {-44.0, -44.0, 45.0, 30.0},
    {44.0, -44.0, 135.0, 30.0},
};

std::vector<LanePath> t_junction_lanes() {
  using V = Eigen::Vector2d;
  std::vector<LanePath> lanes;
  // Dual-carriageway main road plus the stem; enough lane mileage that the
  // configured population fits with the spawn safety margin.
  lanes.push_back({{V(-38, -2.5), V(38, -2.5)}, false, false});                 // W -> E inner
  lanes.push_back({{V(-38, -6.0), V(38, -6.0)}, false, false});                 // W -> E outer
  lanes.push_back({{V(38, 2.5), V(-38, 2.5)}, false, false});                   // E -> W inner
  lanes.push_back({{V(38, 6.0), V(-38, 6.0)}, false, false});                   // E -> W outer
  lanes.push_back({{V(2.5, -18), V(2.5, -2.5), V(38, -2.5)}, false, false});    // S -> E
  lanes.push_back({{V(2.5, -18), V(2.5, 2.5), V(-38, 2.5)}, false, false});     // S -> W
  lanes.push_back({{V(-38, -2.5), V(-2.5, -2.5), V(-2.5, -18)}, false, false}); // W -> S
  lanes.push_back({{V(38, 2.5), V(-2.5, 2.5), V(-2.5, -18)}, false, false});    // E -> S
  // Pedestrian paths on the sidewalks.
  lanes.push_back({{V(-30, 9.5), V(30, 9.5)}, false, true});
  lanes.push_back({{V(-30, 12.5), V(30, 12.5)}, false, true});
  lanes.push_back({{V(-30, -9.5), V(-8, -9.5), V(-8, -18)}, false, true});
  lanes.push_back({{V(8, -18), V(8, -9.5), V(30, -9.5)}, false, true});
  return lanes;
}

std::vector<Eigen::Vector2d> octagon(double radius, double phase_deg) {
  std::vector<Eigen::Vector2d> pts;
  for (int k = 0; k < 8; ++k) {
    const double a = deg(phase_deg + 45.0 * k);
    pts.emplace_back(radius * std::cos(a), radius * std::sin(a));
  }
  return pts;
}

std::vector<LanePath> roundabout_lanes() {
  using V = Eigen::Vector2d;
  std::vector<LanePath> lanes;
  lanes.push_back({octagon(12.0, 22.5), true, false});  // inner circulating ring
  lanes.push_back({octagon(16.0, 0.0), true, false});   // outer circulating ring
  // Entry and exit spokes.
  lanes.push_back({{V(46, -2.5), V(19, -2.5)}, false, false});
  lanes.push_back({{V(19, 2.5), V(46, 2.5)}, false, false});
  lanes.push_back({{V(2.5, 46), V(2.5, 19)}, false, false});
  lanes.push_back({{V(-2.5, 19), V(-2.5, 46)}, false, false});
  lanes.push_back({{V(-46, 2.5), V(-19, 2.5)}, false, false});
  lanes.push_back({{V(-19, -2.5), V(-46, -2.5)}, false, false});
  lanes.push_back({{V(-2.5, -46), V(-2.5, -19)}, false, false});
  lanes.push_back({{V(2.5, -19), V(2.5, -46)}, false, false});
  lanes.push_back({octagon(22.0, 0.0), true, true});    // pedestrian ring
  lanes.push_back({octagon(26.0, 22.5), true, true});   // outer pedestrian ring
  return lanes;
}

}  // namespace

RigidTransform SensorConfig::extrinsic() const {
  return sensor_pose(x, y, mount_height, deg(yaw_deg), deg(pitch_deg));
}

RigidTransform sensor_pose(double x, double y, double height, double yaw, double pitch) {
  const Eigen::Vector3d forward(std::cos(yaw) * std::cos(pitch),
                                std::sin(yaw) * std::cos(pitch), -std::sin(pitch));
  const Eigen::Vector3d right(std::sin(yaw), -std::cos(yaw), 0.0);
  const Eigen::Vector3d down = forward.cross(right);
  RigidTransform t;
  t.rotation.col(0) = right;
  t.rotation.col(1) = down;
  t.rotation.col(2) = forward;
  t.translation = Eigen::Vector3d(x, y, height);
  return t;
}

double LanePath::length() const {
  double total = 0;
  for (std::size_t i = 1; i < waypoints.size(); ++i) {
    total += (waypoints[i] - waypoints[i - 1]).norm();
  }
  if (loop && waypoints.size() > 1) {
    total += (waypoints.front() - waypoints.back()).norm();
  }
  return total;
}

void LanePath::sample(double s, Eigen::Vector2d* position, double* heading) const {
  const double total = length();
  if (waypoints.size() < 2 || total <= 0) {
    *position = waypoints.empty() ? Eigen::Vector2d::Zero() : waypoints.front();
    *heading = 0;
    return;
  }
  if (loop) {
    s = std::fmod(s, total);
    if (s < 0) s += total;
  } else {
    s = std::clamp(s, 0.0, total);
  }
  const std::size_t segments = loop ? waypoints.size() : waypoints.size() - 1;
  for (std::size_t i = 0; i < segments; ++i) {
    const Eigen::Vector2d a = waypoints[i];
    const Eigen::Vector2d b = waypoints[(i + 1) % waypoints.size()];
    const double seg = (b - a).norm();
    if (s <= seg || i + 1 == segments) {
      const double t = seg > 0 ? std::min(s / seg, 1.0) : 0.0;
      *position = a + t * (b - a);
      *heading = std::atan2(b.y() - a.y(), b.x() - a.x());
      return;
    }
    s -= seg;
  }
}

std::string to_string(ScenarioName name) {
  switch (name) {
    case ScenarioName::t_junction: return "t_junction";
    case ScenarioName::roundabout: return "roundabout";
    case ScenarioName::custom: return "custom";
  }
  return "custom";
}

void ScenarioConfig::validate() const {
  if (detection_area.degenerate()) {
    throw std::invalid_argument("scenario: degenerate detection area");
  }
  if (sensors.empty()) {
    throw std::invalid_argument("scenario: at least one sensor is required");
  }
  double prob_sum = 0;
  for (double p : spawn_probabilities) {
    if (p < 0) throw std::invalid_argument("scenario: negative spawn probability");
    prob_sum += p;
  }
  if (std::abs(prob_sum - 1.0) > 1e-12) {
    throw std::invalid_argument("scenario: spawn probabilities must sum to 1");
  }
  if (max_objects < 1 || object_lifespan_frames < 1) {
    throw std::invalid_argument("scenario: max_objects and lifespan must be positive");
  }
  if (noise_sigma < 0 || max_range <= 0) {
    throw std::invalid_argument("scenario: bad noise/range parameters");
  }
  std::vector<bool> seen;
  for (const auto& s : sensors) {
    if (s.mount_height <= 0) {
      throw std::invalid_argument("scenario: mount height must be positive");
    }
    if (!s.intrinsics.valid()) {
      throw std::invalid_argument("scenario: inconsistent camera intrinsics");
    }
    if (s.id < 0) throw std::invalid_argument("scenario: negative sensor id");
    if (static_cast<std::size_t>(s.id) >= seen.size()) seen.resize(s.id + 1, false);
    if (seen[s.id]) throw std::invalid_argument("scenario: duplicate sensor id");
    seen[s.id] = true;
  }
  if (lanes.empty()) {
    throw std::invalid_argument("scenario: no lane paths to place objects on");
  }
}

ScenarioConfig build_scenario(ScenarioName name) {
  ScenarioConfig cfg;
  cfg.name = name;
  const CameraIntrinsics intr = CameraIntrinsics::from_fov(400, 300, 90.0);
  switch (name) {
    case ScenarioName::t_junction: {
      cfg.detection_area = Rect::centered(80.0, 40.0);
      for (int i = 0; i < 6; ++i) {
        cfg.sensors.push_back(make_sensor(i, kTJunctionPoses[i], 5.2, intr));
      }
      cfg.lanes = t_junction_lanes();
      cfg.max_range = 120.0;
      break;
    }
    case ScenarioName::roundabout: {
      cfg.detection_area = Rect::centered(96.0, 96.0);
      for (int i = 0; i < 8; ++i) {
        cfg.sensors.push_back(make_sensor(i, kRoundaboutPoses[i], 8.0, intr));
      }
      cfg.lanes = roundabout_lanes();
      // The far corner sits ~130 m from the post that watches it.
      cfg.max_range = 150.0;
      break;
    }
    case ScenarioName::custom:
      throw std::invalid_argument("build_scenario: custom scenarios come from a config file");
  }
  cfg.validate();
  return cfg;
}

const SizeRange& object_size_range(ObjectClass cls) {
  static const SizeRange car{{3.8, 1.7, 1.4}, {4.8, 2.0, 1.8}};
  static const SizeRange cyclist{{1.7, 0.6, 1.6}, {1.9, 0.8, 1.8}};
  static const SizeRange pedestrian{{0.4, 0.4, 1.6}, {0.6, 0.6, 1.9}};
  switch (cls) {
    case ObjectClass::car: return car;
    case ObjectClass::cyclist: return cyclist;
    case ObjectClass::pedestrian: return pedestrian;
  }
  return car;
}

double object_speed(ObjectClass cls) {
  switch (cls) {
    case ObjectClass::car: return 8.0;
    case ObjectClass::cyclist: return 4.0;
    case ObjectClass::pedestrian: return 1.4;
  }
  return 0.0;
}

}  // namespace coopdet
