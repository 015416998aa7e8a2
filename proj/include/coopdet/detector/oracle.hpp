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

#ifndef COOPDET_DETECTOR_ORACLE_HPP_
#define COOPDET_DETECTOR_ORACLE_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "coopdet/detector/detection.hpp"
#include "coopdet/pointcloud.hpp"
#include "coopdet/scene/simulate.hpp"

namespace coopdet {

/// Everything a detector may consult besides the cloud itself. Simulation
/// ground truth is available so that non-learned detectors can derive their
/// output quality from the observed point density.
struct DetectionContext {
  int frame_id{0};
  std::span<const GroundTruthObject> ground_truth;
  std::optional<int> source_sensor;
};

/// Detection stage interface; implementations must be stateless after
/// construction so frames can be processed concurrently.
class Detector {
 public:
  virtual ~Detector() = default;
  virtual std::vector<Detection> detect(const PointCloud& cloud,
                                        const DetectionContext& ctx) const = 0;
};

/// Output model of the density-calibrated oracle. Box noise shrinks with
/// the observed point density n as sigma = scale / sqrt(n), and confidence
/// follows a logistic curve in log n. score_log_slope = 0 disables the
/// confidence model (score 1 for every emitted box).
struct DetectorParams {
  int min_points{20};
  double center_noise_scale{1.0};   // m * sqrt(points)
  double size_noise_scale{0.5};     // m * sqrt(points)
  double yaw_noise_scale{0.6};      // rad * sqrt(points)
  double score_log_midpoint{50.0};  // density with score 0.5
  double score_log_slope{1.5};
  double false_positive_rate{0.0};  // expected spurious boxes per frame
  Rect fp_area{{-1, -1}, {1, 1}};   // where spurious boxes may appear
  bool cars_only{true};

  /// Noise-free, always-confident detector: emits the exact ground truth of
  /// every object with at least one observed point.
  static DetectorParams perfect();

  double score_for_density(int n) const;
};

/// Stand-in for a learned 3D detector. For every ground-truth object whose
/// point density n (points inside its box) reaches min_points it emits the
/// truth perturbed by zero-mean noise of magnitude decreasing in n; sparser
/// objects are missed. The perturbation direction is drawn from
/// (seed, frame_id, object_id) only, so the same object seen with more
/// points yields a strictly better box.
class OracleDetector final : public Detector {
 public:
  OracleDetector(DetectorParams params, std::uint64_t seed);

  std::vector<Detection> detect(const PointCloud& cloud,
                                const DetectionContext& ctx) const override;

  /// Detection from precomputed per-object densities; counts[i] belongs to
  /// ctx.ground_truth[i]. Point densities are additive over fused clouds,
  /// which makes sensor-subset sweeps cheap.
  std::vector<Detection> detect_from_counts(std::span<const int> counts,
                                            const DetectionContext& ctx) const;

  const DetectorParams& params() const { return params_; }

 private:
  DetectorParams params_;
  std::uint64_t seed_;
};

DetectorParams default_detector_params(ScenarioName name);

/// Adapter for externally produced detections (e.g. a learned model run
/// offline): serves the rows of a detection file keyed by frame and sensor.
class FileDetector final : public Detector {
 public:
  explicit FileDetector(const std::filesystem::path& path);

  std::vector<Detection> detect(const PointCloud& cloud,
                                const DetectionContext& ctx) const override;

 private:
  std::map<std::pair<int, int>, std::vector<Detection>> by_frame_sensor_;
};

}  // namespace coopdet

#endif  // COOPDET_DETECTOR_ORACLE_HPP_
