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

#include "coopdet/metrics/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "coopdet/metrics/iou.hpp"

namespace coopdet {

namespace {

// Descending score, ties by input index: the processing order of both the
// matcher and the PR sweep.
std::vector<int> score_order(std::span<const Detection> detections) {
  std::vector<int> order(detections.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return detections[a].score > detections[b].score;
  });
  return order;
}

}  // namespace

double MatchResult::precision() const {
  const std::size_t positives = pairs.size() + unmatched_det.size();
  return positives == 0 ? 1.0 : static_cast<double>(pairs.size()) / positives;
}

double MatchResult::recall() const {
  const std::size_t truths = pairs.size() + unmatched_gt.size();
  return truths == 0 ? 1.0 : static_cast<double>(pairs.size()) / truths;
}

MatchResult match(std::span<const OrientedBox3> gt, std::span<const Detection> detections,
                  double kappa, double tau) {
  MatchResult result;
  result.kappa = kappa;
  std::vector<bool> gt_used(gt.size(), false);
  for (int d : score_order(detections)) {
    if (detections[d].score < tau) continue;
    int best = -1;
    double best_iou = 0.0;
    for (std::size_t g = 0; g < gt.size(); ++g) {
      if (gt_used[g]) continue;
      const double iou = iou3d(gt[g], detections[d].box);
      if (iou > best_iou) {
        best_iou = iou;
        best = static_cast<int>(g);
      }
    }
    if (best >= 0 && best_iou >= kappa) {
      gt_used[best] = true;
      result.pairs.push_back({best, d, best_iou});
    } else {
      result.unmatched_det.push_back(d);
    }
  }
  for (std::size_t g = 0; g < gt.size(); ++g) {
    if (!gt_used[g]) result.unmatched_gt.push_back(static_cast<int>(g));
  }
  return result;
}

PRCurve pr_curve(std::span<const EvalFrame> frames, double kappa) {
  PRCurve curve;
  for (const auto& f : frames) {
    curve.total_ground_truth += static_cast<int>(f.ground_truth.size());
  }

  // Per-frame greedy pass marks each detection matched or not; the flag of
  // the k-th detection (in score order) is the same for every confidence
  // threshold that admits it, so one pass serves the whole sweep.
  struct Scored {
    double score;
    int frame;
    int index;
    bool matched;
  };
  std::vector<Scored> all;
  for (std::size_t fi = 0; fi < frames.size(); ++fi) {
    const auto& f = frames[fi];
    std::vector<bool> gt_used(f.ground_truth.size(), false);
    for (int d : score_order(f.detections)) {
      int best = -1;
      double best_iou = 0.0;
      for (std::size_t g = 0; g < f.ground_truth.size(); ++g) {
        if (gt_used[g]) continue;
        const double iou = iou3d(f.ground_truth[g], f.detections[d].box);
        if (iou > best_iou) {
          best_iou = iou;
          best = static_cast<int>(g);
        }
      }
      const bool matched = best >= 0 && best_iou >= kappa;
      if (matched) gt_used[best] = true;
      all.push_back({f.detections[d].score, static_cast<int>(fi), d, matched});
    }
  }
  std::sort(all.begin(), all.end(), [](const Scored& a, const Scored& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.frame != b.frame) return a.frame < b.frame;
    return a.index < b.index;
  });

  if (curve.total_ground_truth == 0) return curve;
  int tp = 0;
  for (std::size_t k = 0; k < all.size(); ++k) {
    if (all[k].matched) ++tp;
    curve.points.push_back({static_cast<double>(tp) / curve.total_ground_truth,
                            static_cast<double>(tp) / static_cast<double>(k + 1),
                            all[k].score});
  }
  return curve;
}

std::optional<double> average_precision(std::span<const EvalFrame> frames, double kappa) {
  const PRCurve curve = pr_curve(frames, kappa);
  if (curve.total_ground_truth == 0) return std::nullopt;
  const auto& pts = curve.points;
  std::vector<double> interp(pts.size());
  double running = 0.0;
  for (std::size_t i = pts.size(); i-- > 0;) {
    running = std::max(running, pts[i].precision);
    interp[i] = running;
  }
  double ap = 0.0;
  double prev_recall = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (pts[i].recall > prev_recall) {
      ap += (pts[i].recall - prev_recall) * interp[i];
      prev_recall = pts[i].recall;
    }
  }
  return ap;
}

double recall_at_precision(const PRCurve& curve, double min_precision) {
  const auto& pts = curve.points;
  double best = 0.0;
  double running = 0.0;
  for (std::size_t i = pts.size(); i-- > 0;) {
    running = std::max(running, pts[i].precision);
    if (running >= min_precision) {
      // Recall is non-decreasing along the curve, so the first qualifying
      // index from the back with the interpolated precision wins.
      best = pts[i].recall;
      break;
    }
  }
  return best;
}

double DensityCdf::at(int density) const {
  double value = 0.0;
  for (const auto& s : steps) {
    if (s.density > density) break;
    value = s.cumulative;
  }
  return value;
}

DensityCdf density_cdf(std::span<const int> densities) {
  DensityCdf cdf;
  if (densities.empty()) return cdf;
  std::vector<int> sorted(densities.begin(), densities.end());
  std::sort(sorted.begin(), sorted.end());
  const double total = static_cast<double>(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i + 1 == sorted.size() || sorted[i + 1] != sorted[i]) {
      cdf.steps.push_back({sorted[i], static_cast<double>(i + 1) / total});
    }
  }
  return cdf;
}

std::vector<IouDensityBin> iou_vs_density(
    std::span<const std::pair<int, double>> density_iou, int bins) {
  std::vector<IouDensityBin> out;
  if (density_iou.empty() || bins < 1) return out;
  int lo = density_iou[0].first;
  int hi = lo;
  for (const auto& [d, iou] : density_iou) {
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  const double width = hi > lo ? static_cast<double>(hi - lo) / bins : 1.0;
  std::vector<double> sum(bins, 0.0);
  std::vector<int> count(bins, 0);
  for (const auto& [d, iou] : density_iou) {
    int bin = hi > lo ? static_cast<int>((d - lo) / width) : 0;
    bin = std::clamp(bin, 0, bins - 1);
    sum[bin] += iou;
    count[bin] += 1;
  }
  for (int b = 0; b < bins; ++b) {
    if (count[b] == 0) continue;
    out.push_back({lo + (b + 0.5) * width, sum[b] / count[b], count[b]});
  }
  return out;
}

}  // namespace coopdet
