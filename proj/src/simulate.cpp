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

#include "coopdet/scene/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "coopdet/geometry/polygon.hpp"
#include "coopdet/random.hpp"

namespace coopdet {

namespace {

// Placement keeps footprints at least 2 * kSpawnMargin apart so that
// detector noise on two distinct objects cannot push their boxes into the
// NMS suppression range.
constexpr double kSpawnMargin = 0.75;
constexpr int kMaxSpawnAttempts = 100;

OrientedBox3 inflate_bev(const OrientedBox3& b, double margin) {
  OrientedBox3 out = b;
  out.size.x() += 2 * margin;
  out.size.y() += 2 * margin;
  return out;
}

bool bev_disjoint_with_margin(const OrientedBox3& a, const OrientedBox3& b) {
  return bev_intersection_area(inflate_bev(a, kSpawnMargin),
                               inflate_bev(b, kSpawnMargin)) == 0.0;
}

ObjectClass draw_class(std::mt19937_64& rng, const std::array<double, 3>& probs) {
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  if (u < probs[0]) return ObjectClass::car;
  if (u < probs[0] + probs[1]) return ObjectClass::cyclist;
  return ObjectClass::pedestrian;
}

}  // namespace

ObjectSimulator::ObjectSimulator(ScenarioConfig config, std::uint64_t seed)
    : config_(std::move(config)), seed_(seed) {
  config_.validate();
  first_cohort_ = -(config_.object_lifespan_frames - 1);
}

OrientedBox3 ObjectSimulator::box_at(const Spawned& obj, int frame_id) const {
  const LanePath& lane = config_.lanes[obj.lane];
  const double s = obj.start_offset + obj.speed * kFrameDt * (frame_id - obj.born);
  Eigen::Vector2d xy;
  double heading = 0;
  lane.sample(s, &xy, &heading);
  return OrientedBox3::make({xy.x(), xy.y(), obj.size.z() / 2}, obj.size, heading, obj.cls);
}

void ObjectSimulator::build_cohort(int born) {
  const int k = born - first_cohort_;
  const int lifespan = config_.object_lifespan_frames;
  const double rate = static_cast<double>(config_.max_objects) / lifespan;
  const int count = static_cast<int>(std::floor((k + 1) * rate)) -
                    static_cast<int>(std::floor(k * rate));

  auto rng = make_rng(seed_for(seed_, kSpawnDomain, static_cast<std::uint64_t>(k)));
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  // Everything already alive during this cohort's lifetime.
  std::vector<const Spawned*> alive;
  for (int b = std::max(first_cohort_, born - lifespan + 1); b < born; ++b) {
    for (const auto& o : cohorts_[b - first_cohort_]) alive.push_back(&o);
  }

  std::vector<Spawned> cohort;
  for (int slot = 0; slot < count; ++slot) {
    // The class is drawn once per slot so that placement failures cannot
    // skew the configured class mix.
    const ObjectClass slot_class = draw_class(rng, config_.spawn_probabilities);
    for (int attempt = 0; attempt < kMaxSpawnAttempts; ++attempt) {
      Spawned cand;
      cand.object_id = static_cast<long>(k) * config_.max_objects + slot;
      cand.born = born;
      cand.cls = slot_class;
      const SizeRange& range = object_size_range(cand.cls);
      for (int axis = 0; axis < 3; ++axis) {
        cand.size[axis] = range.min[axis] + unit(rng) * (range.max[axis] - range.min[axis]);
      }
      cand.speed = object_speed(cand.cls);

      std::vector<int> usable;
      const bool wants_pedestrian = cand.cls == ObjectClass::pedestrian;
      for (std::size_t i = 0; i < config_.lanes.size(); ++i) {
        if (config_.lanes[i].pedestrian == wants_pedestrian) usable.push_back(static_cast<int>(i));
      }
      if (usable.empty()) break;
      cand.lane = usable[std::min(static_cast<std::size_t>(unit(rng) * usable.size()),
                                  usable.size() - 1)];
      cand.start_offset = unit(rng) * config_.lanes[cand.lane].length();

      // Reject when the candidate's swept footprint would ever come within
      // the safety margin of anything alive at the same instant.
      bool clear = true;
      for (int f = born; f < born + lifespan && clear; ++f) {
        const OrientedBox3 cand_box = box_at(cand, f);
        for (const Spawned* other : alive) {
          if (f >= other->born + lifespan) continue;
          if (!bev_disjoint_with_margin(cand_box, box_at(*other, f))) {
            clear = false;
            break;
          }
        }
        for (const Spawned& other : cohort) {
          if (!clear) break;
          if (!bev_disjoint_with_margin(cand_box, box_at(other, f))) clear = false;
        }
      }
      if (clear) {
        cohort.push_back(cand);
        break;
      }
    }
  }
  cohorts_.push_back(std::move(cohort));
}

const std::vector<GroundTruthObject>& ObjectSimulator::objects_at(int frame_id) {
  if (frame_id < 0) throw std::invalid_argument("objects_at: frame_id must be >= 0");
  while (frames_built_ <= frame_id) {
    const int frame = frames_built_;
    while (static_cast<int>(cohorts_.size()) <= frame - first_cohort_) {
      build_cohort(first_cohort_ + static_cast<int>(cohorts_.size()));
    }
    std::vector<GroundTruthObject> objects;
    for (int b = std::max(first_cohort_, frame - config_.object_lifespan_frames + 1);
         b <= frame; ++b) {
      for (const auto& o : cohorts_[b - first_cohort_]) {
        objects.push_back({box_at(o, frame), o.object_id});
      }
    }
    frames_.push_back(std::move(objects));
    ++frames_built_;
  }
  return frames_[frame_id];
}

std::vector<GroundTruthObject> spawn_objects(const ScenarioConfig& config,
                                             std::uint64_t seed, int frame_id) {
  ObjectSimulator sim(config, seed);
  return sim.objects_at(frame_id);
}

}  // namespace coopdet
