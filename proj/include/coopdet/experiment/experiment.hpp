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

#ifndef COOPDET_EXPERIMENT_EXPERIMENT_HPP_
#define COOPDET_EXPERIMENT_EXPERIMENT_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "coopdet/comms/comms.hpp"
#include "coopdet/experiment/config.hpp"
#include "coopdet/metrics/evaluation.hpp"

namespace coopdet {

/// A runnable experiment: a scenario bundle plus the protocol parameters.
/// `out_dir` holds both the dataset (for generate) and the result tables.
struct ExperimentSpec {
  ScenarioBundle bundle;
  std::optional<int> frames;         // analysis: defaults to the whole dataset
  std::optional<std::uint64_t> seed; // analysis: defaults to the dataset seed
  std::vector<FusionScheme> schemes{FusionScheme::early, FusionScheme::late,
                                    FusionScheme::hybrid};
  std::vector<std::vector<int>> sensor_sets;  // empty: command-specific default
  std::vector<double> kappas{0.7, 0.8, 0.9};
  std::optional<Rect> roi;
  std::filesystem::path out_dir;
};

/// Sidecar written next to the dataset frames.
struct DatasetManifest {
  int frames{0};
  std::uint64_t seed{0};
  std::vector<int> sensor_ids;
  ScenarioBundle bundle;
};

DatasetManifest read_manifest(const std::filesystem::path& dataset_dir);

/// Renders `spec.frames` frames of the scenario and writes per-sensor
/// global-frame clouds, per-frame ground truth and the manifest. Byte
/// identical across re-runs with the same (bundle, seed, frames).
void cmd_generate(const ExperimentSpec& spec);

struct SchemeResult {
  FusionScheme scheme{FusionScheme::early};
  std::map<double, std::optional<double>> ap_by_kappa;
  double mean_cost_kbit_per_sensor_frame{0};
  double mean_ms_per_frame{0};  // wall clock; reported, never asserted
};

struct CompareReport {
  std::vector<SchemeResult> rows;
  int frames{0};
};

/// Table-style comparison of the requested fusion schemes on an existing
/// dataset: AP at each kappa, mean communication cost per sensor and frame,
/// mean wall-clock per frame. Writes compare_ap.tsv / compare_cost.tsv
/// (deterministic) and compare_timing.tsv (timing, varies run to run).
CompareReport cmd_compare_schemes(const ExperimentSpec& spec);

struct SweepRow {
  std::vector<int> sensors;
  std::optional<double> ap_early;
  std::optional<double> ap_late;
};

struct SweepReport {
  std::vector<SweepRow> rows;  // every evaluated set, grouped by cardinality
  std::map<int, std::vector<int>> best_set_by_cardinality;  // by early-fusion AP
  std::map<int, PRCurve> best_early_pr;
  double kappa{0.7};
};

/// Early/late fusion AP for sensor subsets (all non-empty subsets when
/// spec.sensor_sets is empty; capped at 8 sensors). Writes sweep.tsv and a
/// PR-curve file for the best set of each cardinality.
SweepReport cmd_sensor_sweep(const ExperimentSpec& spec);

struct RoiReport {
  struct Row {
    std::vector<int> sensors;
    std::optional<double> ap;  // empty when the ROI holds no ground truth
    int ground_truth_count{0};
  };
  std::vector<Row> rows;
  Rect roi;
  double kappa{0.7};
};

/// Early-fusion AP restricted to ground truth inside the ROI, for each
/// single sensor of every requested pair and for the pair itself.
RoiReport cmd_roi_study(const ExperimentSpec& spec);

struct DensityReport {
  struct CdfEntry {
    std::vector<int> sensors;
    DensityCdf cdf;
  };
  std::vector<CdfEntry> cdfs;
  std::vector<IouDensityBin> iou_density;  // full requested set, calibrated oracle
};

/// Point-density CDFs per sensor set and the binned IOU-versus-density
/// table. Defaults to every single sensor plus the full set.
DensityReport cmd_density_analysis(const ExperimentSpec& spec);

std::string format_sensor_set(const std::vector<int>& sensors);

}  // namespace coopdet

#endif  // COOPDET_EXPERIMENT_EXPERIMENT_HPP_
