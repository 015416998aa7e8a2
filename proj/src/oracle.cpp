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

#include "coopdet/detector/oracle.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "coopdet/geometry/box_ops.hpp"
#include "coopdet/random.hpp"

namespace coopdet {

DetectorParams DetectorParams::perfect() {
  DetectorParams p;
  p.min_points = 1;
  p.center_noise_scale = 0.0;
  p.size_noise_scale = 0.0;
  p.yaw_noise_scale = 0.0;
  p.score_log_slope = 0.0;  // confidence model off: every box scores 1
  return p;
}

double DetectorParams::score_for_density(int n) const {
  if (score_log_slope <= 0.0) return 1.0;
  const double z = score_log_slope * (std::log(static_cast<double>(n)) -
                                      std::log(score_log_midpoint));
  return 1.0 / (1.0 + std::exp(-z));
}

OracleDetector::OracleDetector(DetectorParams params, std::uint64_t seed)
    : params_(params), seed_(seed) {
  if (params_.min_points < 1) {
    throw std::invalid_argument("oracle: min_points must be >= 1");
  }
}

std::vector<Detection> OracleDetector::detect(const PointCloud& cloud,
                                              const DetectionContext& ctx) const {
  if (cloud.frame != CoordinateFrame::global) {
    throw std::invalid_argument("oracle: cloud must be in the global frame");
  }
  std::vector<int> counts;
  counts.reserve(ctx.ground_truth.size());
  for (const auto& obj : ctx.ground_truth) {
    counts.push_back(count_points_in_box(cloud, obj.box));
  }
  return detect_from_counts(counts, ctx);
}

std::vector<Detection> OracleDetector::detect_from_counts(
    std::span<const int> counts, const DetectionContext& ctx) const {
  if (counts.size() != ctx.ground_truth.size()) {
    throw std::invalid_argument("oracle: one count per ground-truth object required");
  }
  const bool noiseless = params_.center_noise_scale == 0.0 &&
                         params_.size_noise_scale == 0.0 &&
                         params_.yaw_noise_scale == 0.0;
  std::vector<Detection> detections;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const GroundTruthObject& obj = ctx.ground_truth[i];
    if (params_.cars_only && obj.cls() != ObjectClass::car) continue;
    const int n = counts[i];
    if (n < params_.min_points) continue;

    Detection det;
    det.score = params_.score_for_density(n);
    det.source_sensor = ctx.source_sensor;
    if (noiseless) {
      det.box = obj.box;
    } else {
      // The unit perturbation depends only on (seed, frame, object), so the
      // same object observed with more points gets a strictly smaller error.
      auto rng = make_rng(seed_for(seed_, kOracleDomain,
                                   static_cast<std::uint64_t>(ctx.frame_id),
                                   static_cast<std::uint64_t>(obj.object_id)));
      std::normal_distribution<double> unit(0.0, 1.0);
      const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
      OrientedBox3 box = obj.box;
      const double sc = params_.center_noise_scale * inv_sqrt_n;
      const double ss = params_.size_noise_scale * inv_sqrt_n;
      const double sy = params_.yaw_noise_scale * inv_sqrt_n;
      for (int axis = 0; axis < 3; ++axis) box.center[axis] += sc * unit(rng);
      for (int axis = 0; axis < 3; ++axis) {
        box.size[axis] = std::max(0.1, box.size[axis] + ss * unit(rng));
      }
      box.yaw = normalize_yaw(box.yaw + sy * unit(rng));
      det.box = box;
    }
    detections.push_back(det);
  }

  if (params_.false_positive_rate > 0.0) {
    auto rng = make_rng(seed_for(
        seed_, kFalsePositiveDomain, static_cast<std::uint64_t>(ctx.frame_id),
        static_cast<std::uint64_t>(ctx.source_sensor ? *ctx.source_sensor + 1 : 0)));
    std::poisson_distribution<int> count(params_.false_positive_rate);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const SizeRange& range = object_size_range(ObjectClass::car);
    const int spurious = count(rng);
    for (int k = 0; k < spurious; ++k) {
      Detection det;
      Eigen::Vector3d size;
      for (int axis = 0; axis < 3; ++axis) {
        size[axis] = range.min[axis] + unit(rng) * (range.max[axis] - range.min[axis]);
      }
      const double x = params_.fp_area.min.x() + unit(rng) * params_.fp_area.width();
      const double y = params_.fp_area.min.y() + unit(rng) * params_.fp_area.height();
      const double yaw = -std::numbers::pi + unit(rng) * 2.0 * std::numbers::pi;
      det.box = OrientedBox3::make({x, y, size.z() / 2}, size, yaw);
      det.score = 0.5 * unit(rng);
      det.source_sensor = ctx.source_sensor;
      detections.push_back(det);
    }
  }
  return detections;
}

DetectorParams default_detector_params(ScenarioName name) {
  DetectorParams p;
  p.fp_area = build_scenario(name).detection_area;
  return p;
}

FileDetector::FileDetector(const std::filesystem::path& path) {
  for (const auto& record : load_detection_records(path)) {
    by_frame_sensor_[{record.frame_id, record.sensor_id}].push_back(record.detection);
  }
}

std::vector<Detection> FileDetector::detect(const PointCloud& cloud,
                                            const DetectionContext& ctx) const {
  (void)cloud;
  const int sensor = ctx.source_sensor ? *ctx.source_sensor : -1;
  const auto it = by_frame_sensor_.find({ctx.frame_id, sensor});
  return it == by_frame_sensor_.end() ? std::vector<Detection>{} : it->second;
}

}  // namespace coopdet
