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

#include "coopdet/fusion/fusion.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "coopdet/metrics/iou.hpp"

namespace coopdet {

std::string to_string(FusionScheme scheme) {
  switch (scheme) {
    case FusionScheme::early: return "early";
    case FusionScheme::late: return "late";
    case FusionScheme::hybrid: return "hybrid";
  }
  return "early";
}

FusionConfig default_fusion_config(ScenarioName name) {
  FusionConfig cfg;
  cfg.nms_iou_threshold = 0.1;
  cfg.hybrid_radius = name == ScenarioName::roundabout ? 12.0 : 20.0;
  return cfg;
}

PointCloud early_fuse(std::span<const PointCloud> clouds) {
  PointCloud fused;
  fused.frame = CoordinateFrame::global;
  std::size_t total = 0;
  for (const auto& c : clouds) total += c.points.size();
  fused.points.reserve(total);
  for (const auto& c : clouds) {
    if (c.frame != CoordinateFrame::global) {
      throw std::invalid_argument("early_fuse: all clouds must be in the global frame");
    }
    fused.points.insert(fused.points.end(), c.points.begin(), c.points.end());
  }
  return fused;
}

std::vector<Detection> nms(std::span<const Detection> detections, double iou_threshold) {
  auto sensor_key = [](const Detection& d) {
    return d.source_sensor ? *d.source_sensor : std::numeric_limits<int>::max();
  };
  std::vector<int> order(detections.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (detections[a].score != detections[b].score) {
      return detections[a].score > detections[b].score;
    }
    return sensor_key(detections[a]) < sensor_key(detections[b]);
  });

  std::vector<Detection> kept;
  for (int idx : order) {
    const Detection& cand = detections[idx];
    bool suppressed = false;
    for (const Detection& winner : kept) {
      if (iou3d(winner.box, cand.box) > iou_threshold) {
        suppressed = true;
        break;
      }
    }
    if (!suppressed) kept.push_back(cand);
  }
  return kept;
}

std::vector<Detection> late_fuse(std::span<const std::vector<Detection>> per_sensor,
                                 const FusionConfig& config) {
  std::vector<Detection> all;
  for (const auto& list : per_sensor) {
    all.insert(all.end(), list.begin(), list.end());
  }
  return nms(all, config.nms_iou_threshold);
}

PointCloud far_field_cloud(std::span<const SensorObservation> observations,
                           double radius) {
  PointCloud far;
  far.frame = CoordinateFrame::global;
  for (const auto& obs : observations) {
    if (obs.cloud.frame != CoordinateFrame::global) {
      throw std::invalid_argument("far_field_cloud: clouds must be in the global frame");
    }
    for (const auto& p : obs.cloud.points) {
      if ((p.head<2>() - obs.sensor_xy).norm() > radius) far.points.push_back(p);
    }
  }
  return far;
}

std::vector<Detection> hybrid_fuse(std::span<const SensorObservation> observations,
                                   const FusionConfig& config, const Detector& detector,
                                   const DetectionContext& ctx) {
  const PointCloud far = far_field_cloud(observations, config.hybrid_radius);
  DetectionContext central_ctx = ctx;
  central_ctx.source_sensor = std::nullopt;
  const std::vector<Detection> central = detector.detect(far, central_ctx);

  std::vector<Detection> all;
  for (const auto& obs : observations) {
    all.insert(all.end(), obs.detections.begin(), obs.detections.end());
  }
  all.insert(all.end(), central.begin(), central.end());
  return nms(all, config.nms_iou_threshold);
}

}  // namespace coopdet
