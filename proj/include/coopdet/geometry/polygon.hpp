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

#ifndef COOPDET_GEOMETRY_POLYGON_HPP_
#define COOPDET_GEOMETRY_POLYGON_HPP_

#include <array>
#include <cmath>
#include <vector>

#include "coopdet/geometry/types.hpp"

namespace coopdet {

/// Counter-clockwise corners of the bird-eye-view footprint of a box.
template <typename S>
std::array<Vec2<S>, 4> box_bev_corners(const OrientedBox3T<S>& b) {
  const S c = std::cos(b.yaw);
  const S s = std::sin(b.yaw);
  const S hl = b.size.x() / 2;
  const S hw = b.size.y() / 2;
  const Vec2<S> ex(c * hl, s * hl);
  const Vec2<S> ey(-s * hw, c * hw);
  const Vec2<S> ctr(b.center.x(), b.center.y());
  return {ctr + ex + ey, ctr - ex + ey, ctr - ex - ey, ctr + ex - ey};
}

/// Signed area of a simple polygon (positive when counter-clockwise).
template <typename S>
S polygon_signed_area(const std::vector<Vec2<S>>& poly) {
  if (poly.size() < 3) return S(0);
  S twice = S(0);
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    twice += poly[j].x() * poly[i].y() - poly[i].x() * poly[j].y();
  }
  return twice / S(2);
}

/// Sutherland-Hodgman clip of a convex subject polygon against a convex clip
/// polygon. Both polygons must be counter-clockwise; the result is
/// counter-clockwise (possibly empty).
template <typename S>
std::vector<Vec2<S>> clip_convex(const std::vector<Vec2<S>>& subject,
                                 const std::vector<Vec2<S>>& clip) {
  std::vector<Vec2<S>> out = subject;
  std::vector<Vec2<S>> in;
  for (std::size_t e = 0, eprev = clip.size() - 1; e < clip.size(); eprev = e++) {
    if (out.empty()) break;
    const Vec2<S> a = clip[eprev];
    const Vec2<S> edge = clip[e] - a;
    in.swap(out);
    out.clear();
    auto side = [&](const Vec2<S>& p) {
      return edge.x() * (p.y() - a.y()) - edge.y() * (p.x() - a.x());
    };
    for (std::size_t i = 0, j = in.size() - 1; i < in.size(); j = i++) {
      const S dj = side(in[j]);
      const S di = side(in[i]);
      if (dj >= S(0)) {
        out.push_back(in[j]);
        if (di < S(0)) {
          const S t = dj / (dj - di);
          out.push_back(in[j] + t * (in[i] - in[j]));
        }
      } else if (di >= S(0)) {
        const S t = dj / (dj - di);
        out.push_back(in[j] + t * (in[i] - in[j]));
      }
    }
  }
  return out;
}

/// Area of the BEV footprint intersection of two yaw-oriented boxes.
/// Near-zero (degenerate) intersections clamp to exactly 0.
template <typename S>
S bev_intersection_area(const OrientedBox3T<S>& a, const OrientedBox3T<S>& b) {
  const auto ca = box_bev_corners(a);
  const auto cb = box_bev_corners(b);
  const std::vector<Vec2<S>> pa(ca.begin(), ca.end());
  const std::vector<Vec2<S>> pb(cb.begin(), cb.end());
  const auto inter = clip_convex(pa, pb);
  const S area = polygon_signed_area(inter);
  constexpr S eps = static_cast<S>(1e-12);
  return area > eps ? area : S(0);
}

}  // namespace coopdet

#endif  // COOPDET_GEOMETRY_POLYGON_HPP_
