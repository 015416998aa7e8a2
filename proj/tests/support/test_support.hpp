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

// Reference implementations used only by the tests. Everything here is
// written independently of the library code paths it checks: the volume
// oracle samples points, the AP oracle evaluates the interpolated
// precision-recall sum prefix by prefix from scratch, and the matcher oracle
// maximises the assignment exhaustively.

#ifndef COOPDET_TESTS_SUPPORT_TEST_SUPPORT_HPP_
#define COOPDET_TESTS_SUPPORT_TEST_SUPPORT_HPP_

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "coopdet/detector/detection.hpp"
#include "coopdet/geometry/types.hpp"
#include "coopdet/metrics/evaluation.hpp"

namespace coopdet::testing {

/// Monte-Carlo volume oracle: samples the intersection of the two axis
/// aligned bounding boxes and estimates volume(a & b) / volume(a | b).
/// Private inside-test math, no shared code with iou3d.
double mc_iou3d(const OrientedBox3& a, const OrientedBox3& b, long samples,
                std::uint64_t seed);

/// O(n^2) reference non-maximum suppression with the same documented tie
/// rule (score desc, lower sensor id, input order).
std::vector<Detection> reference_nms(std::span<const Detection> detections,
                                     double iou_threshold);

/// Direct evaluation of the interpolated average-precision sum: one
/// operating point per detection prefix, each matched from scratch.
double reference_average_precision(std::span<const EvalFrame> frames, double kappa);

/// Size of a maximum one-to-one assignment between ground truth and
/// detections with IOU >= kappa and score >= tau (augmenting paths).
int max_matching_count(std::span<const OrientedBox3> gt,
                       std::span<const Detection> detections, double kappa, double tau);

OrientedBox3 random_box(std::mt19937_64& rng, double center_span, double size_min,
                        double size_max);

/// Uniformly random proper rotation plus bounded translation.
RigidTransform random_rigid_transform(std::mt19937_64& rng, double translation_span);

}  // namespace coopdet::testing

#endif  // COOPDET_TESTS_SUPPORT_TEST_SUPPORT_HPP_
