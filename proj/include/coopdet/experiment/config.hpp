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

#ifndef COOPDET_EXPERIMENT_CONFIG_HPP_
#define COOPDET_EXPERIMENT_CONFIG_HPP_

#include <filesystem>
#include <vector>

#include "coopdet/detector/oracle.hpp"
#include "coopdet/detector/voxel.hpp"
#include "coopdet/fusion/fusion.hpp"
#include "coopdet/scene/scenario.hpp"

namespace coopdet {

/// Everything a scenario ships with: geometry, detector calibration, fusion
/// parameters and the default region-of-interest study setup.
struct ScenarioBundle {
  ScenarioConfig scenario;
  VoxelGridSpec voxel;
  AnchorGridSpec anchors;
  FusionConfig fusion;
  DetectorParams detector;
  Rect roi;                            // default ROI for the roi study
  std::vector<std::vector<int>> roi_pairs;  // overlapping-FOV sensor pairs
};

ScenarioBundle default_bundle(ScenarioName name);

/// JSON scenario file with a comment header documenting units (meters,
/// degrees). Keys mirror the struct fields one to one.
ScenarioBundle load_scenario_file(const std::filesystem::path& path);
void save_scenario_file(const ScenarioBundle& bundle, const std::filesystem::path& path);

}  // namespace coopdet

#endif  // COOPDET_EXPERIMENT_CONFIG_HPP_
