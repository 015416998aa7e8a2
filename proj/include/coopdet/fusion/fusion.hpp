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

#ifndef COOPDET_FUSION_FUSION_HPP_
#define COOPDET_FUSION_FUSION_HPP_

#include <span>
#include <string>
#include <vector>

#include "coopdet/detector/detection.hpp"
#include "coopdet/detector/oracle.hpp"
#include "coopdet/pointcloud.hpp"
#include "coopdet/scene/scenario.hpp"

namespace coopdet {

enum class FusionScheme { early, late, hybrid };

std::string to_string(FusionScheme scheme);

struct FusionConfig {
  FusionScheme scheme{FusionScheme::early};
  double nms_iou_threshold{0.1};
  double hybrid_radius{20.0};  // meters; near-field cutoff per sensor
};

FusionConfig default_fusion_config(ScenarioName name);

/// Multiset union of global-frame clouds, concatenated in input order with
/// no deduplication. Throws on a cloud not tagged global.
PointCloud early_fuse(std::span<const PointCloud> clouds);

/// Greedy non-maximum suppression on volumetric IOU: boxes are visited in
/// descending score order (ties by lower sensor id, detections without a
/// sensor last, then input order) and kept iff their IOU with every
/// previously kept box is <= iou_threshold. Output sorted by the same key;
/// scores are untouched.
std::vector<Detection> nms(std::span<const Detection> detections, double iou_threshold);

/// Concatenates the per-sensor detection lists (ascending list order, which
/// callers keep aligned with sensor ids) and suppresses duplicates with nms.
std::vector<Detection> late_fuse(std::span<const std::vector<Detection>> per_sensor,
                                 const FusionConfig& config);

/// One sensor's contribution to hybrid fusion: its full cropped cloud, its
/// own detections computed from that cloud, and the sensor position used for
/// the near/far split.
struct SensorObservation {
  PointCloud cloud;                  // global frame
  std::vector<Detection> detections;
  Eigen::Vector2d sensor_xy{0, 0};
};

/// Selects per sensor the points whose horizontal distance to that sensor
/// exceeds the radius (the far field each sensor shares with the center).
PointCloud far_field_cloud(std::span<const SensorObservation> observations,
                           double radius);

/// Hybrid scheme: per-sensor detections are merged with the detections the
/// central detector finds on the early-fused far-field cloud; the merge runs
/// nms over the per-sensor lists (ascending input order) followed by the
/// central list.
std::vector<Detection> hybrid_fuse(std::span<const SensorObservation> observations,
                                   const FusionConfig& config, const Detector& detector,
                                   const DetectionContext& ctx);

}  // namespace coopdet

#endif  // COOPDET_FUSION_FUSION_HPP_
