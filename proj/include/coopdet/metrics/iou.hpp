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

#ifndef COOPDET_METRICS_IOU_HPP_
#define COOPDET_METRICS_IOU_HPP_

#include <algorithm>

#include "coopdet/geometry/polygon.hpp"
#include "coopdet/geometry/types.hpp"

namespace coopdet {

/// Volumetric intersection over union of two yaw-oriented boxes. The
/// intersection volume is the BEV polygon intersection area (convex
/// clipping) times the overlap of the z intervals.
template <typename S>
S iou3d(const OrientedBox3T<S>& a, const OrientedBox3T<S>& b) {
  const S dz = std::min(a.top_z(), b.top_z()) - std::max(a.bottom_z(), b.bottom_z());
  if (dz <= S(0)) return S(0);
  const S bev = bev_intersection_area(a, b);
  if (bev <= S(0)) return S(0);
  const S inter = bev * dz;
  const S uni = a.volume() + b.volume() - inter;
  if (uni <= S(0)) return S(0);
  return std::clamp(inter / uni, S(0), S(1));
}

}  // namespace coopdet

#endif  // COOPDET_METRICS_IOU_HPP_
