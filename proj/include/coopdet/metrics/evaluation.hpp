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

#ifndef COOPDET_METRICS_EVALUATION_HPP_
#define COOPDET_METRICS_EVALUATION_HPP_

#include <optional>
#include <span>
#include <vector>

#include "coopdet/detector/detection.hpp"
#include "coopdet/geometry/types.hpp"

namespace coopdet {

/// One-to-one assignment between ground truth and detections at IOU
/// threshold kappa, confidence threshold tau.
struct MatchResult {
  struct Pair {
    int gt_index;
    int det_index;
    double iou;
  };
  std::vector<Pair> pairs;
  std::vector<int> unmatched_gt;
  std::vector<int> unmatched_det;  // above tau but unassigned (false positives)
  double kappa{0};

  double precision() const;
  double recall() const;
};

/// Greedy matching: detections with score >= tau are processed in
/// descending score order (ties by input index) and each claims the
/// unmatched ground-truth box of highest IOU, accepted iff IOU >= kappa.
MatchResult match(std::span<const OrientedBox3> gt, std::span<const Detection> detections,
                  double kappa, double tau);

/// Ground truth and detections of one evaluation frame.
struct EvalFrame {
  std::vector<OrientedBox3> ground_truth;
  std::vector<Detection> detections;
};

struct PRPoint {
  double recall;
  double precision;
  double score;  // the tau that produced this operating point
};

/// Operating points swept over the detection scores in descending order
/// (one point per detection); recall is non-decreasing along the curve.
struct PRCurve {
  std::vector<PRPoint> points;
  int total_ground_truth{0};
};

PRCurve pr_curve(std::span<const EvalFrame> frames, double kappa);

/// Area under the interpolated precision-recall curve: the sum over
/// recall increments of the max precision at or beyond that recall.
/// Empty ground truth has no defined recall axis and yields nullopt; zero
/// detections over nonempty ground truth yield 0.
std::optional<double> average_precision(std::span<const EvalFrame> frames, double kappa);

/// Largest recall on the curve whose interpolated precision still reaches
/// min_precision (0 when the curve never does).
double recall_at_precision(const PRCurve& curve, double min_precision);

/// Empirical CDF of per-object point densities: F(d) = fraction of objects
/// with density <= d, one step per distinct density.
struct DensityCdf {
  struct Step {
    int density;
    double cumulative;
  };
  std::vector<Step> steps;

  double at(int density) const;
};

DensityCdf density_cdf(std::span<const int> densities);

/// Mean IOU of matched detections bucketed into uniform density bins over
/// the observed range; empty bins are omitted.
struct IouDensityBin {
  double bin_center;
  double mean_iou;
  int count;
};

std::vector<IouDensityBin> iou_vs_density(
    std::span<const std::pair<int, double>> density_iou, int bins = 200);

}  // namespace coopdet

#endif  // COOPDET_METRICS_EVALUATION_HPP_
