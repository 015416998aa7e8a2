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

#include "test_support.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>

#include "coopdet/metrics/iou.hpp"

namespace coopdet::testing {

namespace {

// Self-contained splitmix64 stream; keeps the oracle free of the library's
// random utilities.
struct MixStream {
  std::uint64_t state;
  std::uint64_t next_u64() {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
};

struct BoxFrame {
  double cx, cy, cz;
  double cos_yaw, sin_yaw;
  double hl, hw, hh;

  explicit BoxFrame(const OrientedBox3& b)
      : cx(b.center.x()), cy(b.center.y()), cz(b.center.z()),
        cos_yaw(std::cos(b.yaw)), sin_yaw(std::sin(b.yaw)),
        hl(b.size.x() / 2), hw(b.size.y() / 2), hh(b.size.z() / 2) {}

  bool contains(double x, double y, double z) const {
    const double dz = z - cz;
    if (dz < -hh || dz > hh) return false;
    const double dx = x - cx;
    const double dy = y - cy;
    const double bx = cos_yaw * dx + sin_yaw * dy;
    if (bx < -hl || bx > hl) return false;
    const double by = -sin_yaw * dx + cos_yaw * dy;
    return by >= -hw && by <= hw;
  }
};

void bev_aabb(const OrientedBox3& b, double* xmin, double* xmax, double* ymin,
              double* ymax) {
  const double c = std::abs(std::cos(b.yaw));
  const double s = std::abs(std::sin(b.yaw));
  const double ex = c * b.size.x() / 2 + s * b.size.y() / 2;
  const double ey = s * b.size.x() / 2 + c * b.size.y() / 2;
  *xmin = b.center.x() - ex;
  *xmax = b.center.x() + ex;
  *ymin = b.center.y() - ey;
  *ymax = b.center.y() + ey;
}

}  // namespace

double mc_iou3d(const OrientedBox3& a, const OrientedBox3& b, long samples,
                std::uint64_t seed) {
  double ax0, ax1, ay0, ay1, bx0, bx1, by0, by1;
  bev_aabb(a, &ax0, &ax1, &ay0, &ay1);
  bev_aabb(b, &bx0, &bx1, &by0, &by1);
  const double x0 = std::max(ax0, bx0), x1 = std::min(ax1, bx1);
  const double y0 = std::max(ay0, by0), y1 = std::min(ay1, by1);
  const double z0 = std::max(a.bottom_z(), b.bottom_z());
  const double z1 = std::min(a.top_z(), b.top_z());
  if (x0 >= x1 || y0 >= y1 || z0 >= z1) return 0.0;

  const BoxFrame fa(a), fb(b);
  MixStream rng{seed};
  long hits = 0;
  for (long i = 0; i < samples; ++i) {
    const double x = x0 + (x1 - x0) * rng.next_unit();
    const double y = y0 + (y1 - y0) * rng.next_unit();
    const double z = z0 + (z1 - z0) * rng.next_unit();
    if (fa.contains(x, y, z) && fb.contains(x, y, z)) ++hits;
  }
  const double region = (x1 - x0) * (y1 - y0) * (z1 - z0);
  const double inter = region * static_cast<double>(hits) / static_cast<double>(samples);
  const double uni = a.volume() + b.volume() - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

std::vector<Detection> reference_nms(std::span<const Detection> detections,
                                     double iou_threshold) {
  std::vector<int> order(detections.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int lhs, int rhs) {
    if (detections[lhs].score != detections[rhs].score) {
      return detections[lhs].score > detections[rhs].score;
    }
    const int sl = detections[lhs].source_sensor.value_or(std::numeric_limits<int>::max());
    const int sr = detections[rhs].source_sensor.value_or(std::numeric_limits<int>::max());
    return sl < sr;
  });
  std::vector<bool> removed(detections.size(), false);
  std::vector<Detection> kept;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (removed[order[i]]) continue;
    kept.push_back(detections[order[i]]);
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      if (removed[order[j]]) continue;
      if (iou3d(detections[order[i]].box, detections[order[j]].box) > iou_threshold) {
        removed[order[j]] = true;
      }
    }
  }
  return kept;
}

double reference_average_precision(std::span<const EvalFrame> frames, double kappa) {
  struct Ranked {
    double score;
    int frame;
    int index;
  };
  std::vector<Ranked> ranked;
  int total_gt = 0;
  for (std::size_t f = 0; f < frames.size(); ++f) {
    total_gt += static_cast<int>(frames[f].ground_truth.size());
    for (std::size_t d = 0; d < frames[f].detections.size(); ++d) {
      ranked.push_back({frames[f].detections[d].score, static_cast<int>(f),
                        static_cast<int>(d)});
    }
  }
  if (total_gt == 0 || ranked.empty()) return 0.0;
  std::sort(ranked.begin(), ranked.end(), [](const Ranked& a, const Ranked& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.frame != b.frame) return a.frame < b.frame;
    return a.index < b.index;
  });

  // Greedy matching of one prefix, recomputed from scratch.
  const auto prefix_tp = [&](std::size_t prefix) {
    int tp = 0;
    for (std::size_t f = 0; f < frames.size(); ++f) {
      std::vector<bool> used(frames[f].ground_truth.size(), false);
      for (std::size_t k = 0; k < prefix; ++k) {
        if (ranked[k].frame != static_cast<int>(f)) continue;
        const Detection& det = frames[f].detections[ranked[k].index];
        int best = -1;
        double best_iou = 0.0;
        for (std::size_t g = 0; g < frames[f].ground_truth.size(); ++g) {
          if (used[g]) continue;
          const double iou = iou3d(frames[f].ground_truth[g], det.box);
          if (iou > best_iou) {
            best_iou = iou;
            best = static_cast<int>(g);
          }
        }
        if (best >= 0 && best_iou >= kappa) {
          used[best] = true;
          ++tp;
        }
      }
    }
    return tp;
  };

  const std::size_t m = ranked.size();
  std::vector<double> recall(m + 1, 0.0), precision(m + 1, 1.0);
  for (std::size_t k = 1; k <= m; ++k) {
    const int tp = prefix_tp(k);
    recall[k] = static_cast<double>(tp) / total_gt;
    precision[k] = static_cast<double>(tp) / static_cast<double>(k);
  }
  double ap = 0.0;
  for (std::size_t n = 0; n + 1 <= m; ++n) {
    const double r_next = recall[n + 1];
    double p_interp = 0.0;
    for (std::size_t j = 1; j <= m; ++j) {
      if (recall[j] >= r_next) p_interp = std::max(p_interp, precision[j]);
    }
    ap += (r_next - recall[n]) * p_interp;
  }
  return ap;
}

int max_matching_count(std::span<const OrientedBox3> gt,
                       std::span<const Detection> detections, double kappa,
                       double tau) {
  std::vector<std::vector<int>> edges(detections.size());
  for (std::size_t d = 0; d < detections.size(); ++d) {
    if (detections[d].score < tau) continue;
    for (std::size_t g = 0; g < gt.size(); ++g) {
      if (iou3d(gt[g], detections[d].box) >= kappa) {
        edges[d].push_back(static_cast<int>(g));
      }
    }
  }
  std::vector<int> owner(gt.size(), -1);
  std::vector<bool> visited;
  const std::function<bool(int)> augment = [&](int d) -> bool {
    for (int g : edges[d]) {
      if (visited[g]) continue;
      visited[g] = true;
      if (owner[g] < 0 || augment(owner[g])) {
        owner[g] = d;
        return true;
      }
    }
    return false;
  };
  int matched = 0;
  for (std::size_t d = 0; d < detections.size(); ++d) {
    visited.assign(gt.size(), false);
    if (augment(static_cast<int>(d))) ++matched;
  }
  return matched;
}

OrientedBox3 random_box(std::mt19937_64& rng, double center_span, double size_min,
                        double size_max) {
  std::uniform_real_distribution<double> center(-center_span, center_span);
  std::uniform_real_distribution<double> size(size_min, size_max);
  std::uniform_real_distribution<double> yaw(-std::numbers::pi, std::numbers::pi);
  return OrientedBox3::make({center(rng), center(rng), center(rng)},
                            {size(rng), size(rng), size(rng)}, yaw(rng));
}

RigidTransform random_rigid_transform(std::mt19937_64& rng, double translation_span) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::Quaterniond q(normal(rng), normal(rng), normal(rng), normal(rng));
  q.normalize();
  std::uniform_real_distribution<double> shift(-translation_span, translation_span);
  RigidTransform t;
  t.rotation = q.toRotationMatrix();
  t.translation = {shift(rng), shift(rng), shift(rng)};
  return t;
}

}  // namespace coopdet::testing
