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

#ifndef COOPDET_SCENE_SIMULATE_HPP_
#define COOPDET_SCENE_SIMULATE_HPP_

#include <cstdint>
#include <vector>

#include "coopdet/geometry/types.hpp"
#include "coopdet/scene/scenario.hpp"

namespace coopdet {

struct GroundTruthObject {
  OrientedBox3 box;
  long object_id{0};

  ObjectClass cls() const { return box.cls; }
};

/// Deterministic scene population. Objects are born in per-frame cohorts,
/// live exactly `object_lifespan_frames` frames and move along lane paths at
/// a constant per-class speed. A cohort's randomness depends only on
/// (seed, birth frame), so any frame can be reproduced independently of the
/// query order.
///
/// New objects are rejection-sampled so that no two boxes ever overlap in
/// BEV during their shared lifetime; placement keeps a safety margin between
/// footprints so later detector noise cannot make distinct objects collide
/// in the suppression stage. A slot is left empty after 100 failed attempts.
class ObjectSimulator {
 public:
  ObjectSimulator(ScenarioConfig config, std::uint64_t seed);

  /// Ground truth for one frame, cached. frame_id must be >= 0.
  const std::vector<GroundTruthObject>& objects_at(int frame_id);

  const ScenarioConfig& config() const { return config_; }

 private:
  struct Spawned {
    long object_id;
    int born;
    int lane;
    double start_offset;
    double speed;
    Eigen::Vector3d size;
    ObjectClass cls;
  };

  OrientedBox3 box_at(const Spawned& obj, int frame_id) const;
  void build_cohort(int born);

  ScenarioConfig config_;
  std::uint64_t seed_;
  int first_cohort_;
  std::vector<std::vector<Spawned>> cohorts_;  // index: born - first_cohort_
  std::vector<std::vector<GroundTruthObject>> frames_;
  int frames_built_{0};
};

/// One-shot convenience around ObjectSimulator.
std::vector<GroundTruthObject> spawn_objects(const ScenarioConfig& config,
                                             std::uint64_t seed, int frame_id);

}  // namespace coopdet

#endif  // COOPDET_SCENE_SIMULATE_HPP_
