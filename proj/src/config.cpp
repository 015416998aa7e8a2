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

#include "coopdet/experiment/config.hpp"

#include <fstream>
#include <stdexcept>

#include "config_json.hpp"

namespace coopdet {

namespace {

using nlohmann::json;

json to_json(const Rect& r) {
  return json{{"min", {r.min.x(), r.min.y()}}, {"max", {r.max.x(), r.max.y()}}};
}

Rect rect_from_json(const json& j) {
  Rect r;
  r.min = {j.at("min").at(0).get<double>(), j.at("min").at(1).get<double>()};
  r.max = {j.at("max").at(0).get<double>(), j.at("max").at(1).get<double>()};
  return r;
}

json to_json(const CameraIntrinsics& intr) {
  return json{{"focal_length", intr.focal_length}, {"cu", intr.cu},   {"cv", intr.cv},
              {"width", intr.width},               {"height", intr.height},
              {"horizontal_fov_deg", intr.horizontal_fov_deg}};
}

CameraIntrinsics intrinsics_from_json(const json& j) {
  CameraIntrinsics intr;
  intr.focal_length = j.at("focal_length").get<double>();
  intr.cu = j.at("cu").get<double>();
  intr.cv = j.at("cv").get<double>();
  intr.width = j.at("width").get<int>();
  intr.height = j.at("height").get<int>();
  intr.horizontal_fov_deg = j.at("horizontal_fov_deg").get<double>();
  return intr;
}

ScenarioName scenario_name_from_string(const std::string& s) {
  if (s == "t_junction") return ScenarioName::t_junction;
  if (s == "roundabout") return ScenarioName::roundabout;
  if (s == "custom") return ScenarioName::custom;
  throw std::runtime_error("scenario config: unknown scenario name '" + s + "'");
}

}  // namespace

ScenarioBundle default_bundle(ScenarioName name) {
  ScenarioBundle bundle;
  bundle.scenario = build_scenario(name);
  bundle.voxel = default_voxel_spec(name, bundle.scenario.detection_area);
  bundle.anchors = default_anchor_spec(name);
  bundle.fusion = default_fusion_config(name);
  bundle.detector = default_detector_params(name);
  if (name == ScenarioName::t_junction) {
    // Central band seen by both road-end cameras (0, 1) and by the two
    // mid-block cameras (4, 5).
    bundle.roi = Rect{{-15.0, -10.0}, {15.0, 10.0}};
    bundle.roi_pairs = {{0, 1}, {4, 5}};
  } else {
    // North-east quadrant, watched by the mid-edge posts 0 and 1.
    bundle.roi = Rect{{4.0, 4.0}, {44.0, 44.0}};
    bundle.roi_pairs = {{0, 1}, {4, 5}};
  }
  return bundle;
}

json bundle_to_json(const ScenarioBundle& bundle) {
  json j;
  const ScenarioConfig& s = bundle.scenario;
  json sensors = json::array();
  for (const auto& sensor : s.sensors) {
    sensors.push_back(json{{"id", sensor.id},
                           {"x", sensor.x},
                           {"y", sensor.y},
                           {"yaw_deg", sensor.yaw_deg},
                           {"pitch_deg", sensor.pitch_deg},
                           {"mount_height", sensor.mount_height},
                           {"intrinsics", to_json(sensor.intrinsics)}});
  }
  json lanes = json::array();
  for (const auto& lane : s.lanes) {
    json pts = json::array();
    for (const auto& p : lane.waypoints) pts.push_back({p.x(), p.y()});
    lanes.push_back(json{{"waypoints", pts}, {"loop", lane.loop},
                         {"pedestrian", lane.pedestrian}});
  }
  j["scenario"] = json{{"name", to_string(s.name)},
                       {"detection_area", to_json(s.detection_area)},
                       {"sensors", sensors},
                       {"max_objects", s.max_objects},
                       {"spawn_probabilities", s.spawn_probabilities},
                       {"object_lifespan_frames", s.object_lifespan_frames},
                       {"noise_sigma", s.noise_sigma},
                       {"height_cutoff", s.height_cutoff},
                       {"max_range", s.max_range},
                       {"lanes", lanes}};
  j["voxel"] = json{{"voxel_size", {bundle.voxel.voxel_size.x(), bundle.voxel.voxel_size.y(),
                                    bundle.voxel.voxel_size.z()}},
                    {"max_points_per_voxel", bundle.voxel.max_points_per_voxel},
                    {"z_min", bundle.voxel.z_min},
                    {"z_max", bundle.voxel.z_max}};
  j["anchors"] = json{{"anchor_size", {bundle.anchors.anchor_size.x(),
                                       bundle.anchors.anchor_size.y(),
                                       bundle.anchors.anchor_size.z()}},
                      {"stride", bundle.anchors.stride},
                      {"center_z", bundle.anchors.center_z}};
  j["fusion"] = json{{"nms_iou_threshold", bundle.fusion.nms_iou_threshold},
                     {"hybrid_radius", bundle.fusion.hybrid_radius}};
  j["detector"] = json{{"min_points", bundle.detector.min_points},
                       {"center_noise_scale", bundle.detector.center_noise_scale},
                       {"size_noise_scale", bundle.detector.size_noise_scale},
                       {"yaw_noise_scale", bundle.detector.yaw_noise_scale},
                       {"score_log_midpoint", bundle.detector.score_log_midpoint},
                       {"score_log_slope", bundle.detector.score_log_slope},
                       {"false_positive_rate", bundle.detector.false_positive_rate},
                       {"fp_area", to_json(bundle.detector.fp_area)},
                       {"cars_only", bundle.detector.cars_only}};
  j["roi_study"] = json{{"roi", to_json(bundle.roi)}, {"pairs", bundle.roi_pairs}};
  return j;
}

void save_scenario_file(const ScenarioBundle& bundle, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("save_scenario_file: cannot open " + path.string());
  out << "// coopdet scenario configuration\n"
      << "// units: meters for lengths and positions, degrees for yaw_deg /\n"
      << "// pitch_deg / horizontal_fov_deg; yaw is measured in the global XY\n"
      << "// plane, pitch tilts the camera downward.\n"
      << bundle_to_json(bundle).dump(2) << '\n';
  if (!out) throw std::runtime_error("save_scenario_file: write failed " + path.string());
}

ScenarioBundle bundle_from_json(const json& j) {
  ScenarioBundle bundle;
  const json& sj = j.at("scenario");
  ScenarioConfig& s = bundle.scenario;
  s.name = scenario_name_from_string(sj.at("name").get<std::string>());
  s.detection_area = rect_from_json(sj.at("detection_area"));
  for (const auto& sensor_j : sj.at("sensors")) {
    SensorConfig sensor;
    sensor.id = sensor_j.at("id").get<int>();
    sensor.x = sensor_j.at("x").get<double>();
    sensor.y = sensor_j.at("y").get<double>();
    sensor.yaw_deg = sensor_j.at("yaw_deg").get<double>();
    sensor.pitch_deg = sensor_j.at("pitch_deg").get<double>();
    sensor.mount_height = sensor_j.at("mount_height").get<double>();
    sensor.intrinsics = intrinsics_from_json(sensor_j.at("intrinsics"));
    s.sensors.push_back(sensor);
  }
  s.max_objects = sj.at("max_objects").get<int>();
  s.spawn_probabilities = sj.at("spawn_probabilities").get<std::array<double, 3>>();
  s.object_lifespan_frames = sj.at("object_lifespan_frames").get<int>();
  s.noise_sigma = sj.at("noise_sigma").get<double>();
  s.height_cutoff = sj.at("height_cutoff").get<double>();
  s.max_range = sj.at("max_range").get<double>();
  for (const auto& lane_j : sj.at("lanes")) {
    LanePath lane;
    for (const auto& p : lane_j.at("waypoints")) {
      lane.waypoints.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
    }
    lane.loop = lane_j.at("loop").get<bool>();
    lane.pedestrian = lane_j.at("pedestrian").get<bool>();
    s.lanes.push_back(std::move(lane));
  }
  s.validate();

  const json& vj = j.at("voxel");
  bundle.voxel.voxel_size = {vj.at("voxel_size").at(0).get<double>(),
                             vj.at("voxel_size").at(1).get<double>(),
                             vj.at("voxel_size").at(2).get<double>()};
  bundle.voxel.max_points_per_voxel = vj.at("max_points_per_voxel").get<int>();
  bundle.voxel.z_min = vj.at("z_min").get<double>();
  bundle.voxel.z_max = vj.at("z_max").get<double>();
  bundle.voxel.area = s.detection_area;

  const json& aj = j.at("anchors");
  bundle.anchors.anchor_size = {aj.at("anchor_size").at(0).get<double>(),
                                aj.at("anchor_size").at(1).get<double>(),
                                aj.at("anchor_size").at(2).get<double>()};
  bundle.anchors.stride = aj.at("stride").get<double>();
  bundle.anchors.center_z = aj.at("center_z").get<double>();

  const json& fj = j.at("fusion");
  bundle.fusion.nms_iou_threshold = fj.at("nms_iou_threshold").get<double>();
  bundle.fusion.hybrid_radius = fj.at("hybrid_radius").get<double>();
  if (bundle.fusion.nms_iou_threshold <= 0.0 || bundle.fusion.nms_iou_threshold >= 1.0) {
    throw std::runtime_error("scenario config: nms_iou_threshold must be in (0, 1)");
  }
  if (bundle.fusion.hybrid_radius < 0.0) {
    throw std::runtime_error("scenario config: hybrid_radius must be >= 0");
  }

  const json& dj = j.at("detector");
  bundle.detector.min_points = dj.at("min_points").get<int>();
  bundle.detector.center_noise_scale = dj.at("center_noise_scale").get<double>();
  bundle.detector.size_noise_scale = dj.at("size_noise_scale").get<double>();
  bundle.detector.yaw_noise_scale = dj.at("yaw_noise_scale").get<double>();
  bundle.detector.score_log_midpoint = dj.at("score_log_midpoint").get<double>();
  bundle.detector.score_log_slope = dj.at("score_log_slope").get<double>();
  bundle.detector.false_positive_rate = dj.at("false_positive_rate").get<double>();
  bundle.detector.fp_area = rect_from_json(dj.at("fp_area"));
  bundle.detector.cars_only = dj.at("cars_only").get<bool>();

  bundle.roi = rect_from_json(j.at("roi_study").at("roi"));
  bundle.roi_pairs = j.at("roi_study").at("pairs").get<std::vector<std::vector<int>>>();
  return bundle;
}

ScenarioBundle load_scenario_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_scenario_file: cannot open " + path.string());
  json j = json::parse(in, nullptr, /*allow_exceptions=*/true, /*ignore_comments=*/true);
  return bundle_from_json(j);
}

}  // namespace coopdet
