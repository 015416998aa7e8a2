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

#include "coopdet/experiment/experiment.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "coopdet/geometry/box_ops.hpp"
#include "coopdet/preprocess/preprocess.hpp"
#include "coopdet/scene/dataset_io.hpp"
#include "coopdet/scene/render.hpp"
#include "config_json.hpp"

namespace coopdet {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::string metric(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::string metric(const std::optional<double>& v) {
  return v ? metric(*v) : std::string{};
}

std::ofstream open_table(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open output table " + path.string());
  return out;
}

/// Everything the analysis commands need from one dataset frame, with the
/// clouds already reduced to per-object point densities. Densities are
/// additive over sensors, so any sensor subset can be evaluated from this
/// cache without touching the points again.
struct FrameCache {
  int frame_id{0};
  std::vector<GroundTruthObject> gt_cars;
  std::vector<OrientedBox3> gt_boxes;
  std::vector<std::vector<int>> counts;              // [sensor slot][car]
  std::vector<long> cropped_points;                  // per sensor slot
  std::vector<std::vector<Detection>> sensor_dets;   // per sensor slot
};

FrameCache build_frame_cache(const std::filesystem::path& dir,
                             const DatasetManifest& manifest,
                             const ScenarioBundle& bundle,
                             const OracleDetector& oracle, int frame_id,
                             std::vector<PointCloud>* cropped_out = nullptr) {
  FrameCache cache;
  cache.frame_id = frame_id;
  for (const auto& obj : load_ground_truth(ground_truth_path(dir, frame_id))) {
    if (obj.cls() == ObjectClass::car) {
      cache.gt_cars.push_back(obj);
      cache.gt_boxes.push_back(obj.box);
    }
  }
  const std::size_t sensors = manifest.sensor_ids.size();
  cache.counts.resize(sensors);
  cache.cropped_points.resize(sensors);
  cache.sensor_dets.resize(sensors);
  if (cropped_out) cropped_out->resize(sensors);
  for (std::size_t s = 0; s < sensors; ++s) {
    const int sensor_id = manifest.sensor_ids[s];
    PointCloud cloud = load_pointcloud(cloud_path(dir, frame_id, sensor_id));
    PointCloud cropped = crop(cloud, bundle.scenario.detection_area,
                              bundle.scenario.height_cutoff);
    cache.cropped_points[s] = static_cast<long>(cropped.size());
    cache.counts[s].reserve(cache.gt_cars.size());
    for (const auto& obj : cache.gt_cars) {
      cache.counts[s].push_back(count_points_in_box(cropped, obj.box));
    }
    const DetectionContext ctx{frame_id, cache.gt_cars, sensor_id};
    cache.sensor_dets[s] = oracle.detect_from_counts(cache.counts[s], ctx);
    if (cropped_out) (*cropped_out)[s] = std::move(cropped);
  }
  return cache;
}

std::vector<int> sum_counts(const FrameCache& cache, std::span<const int> slots) {
  std::vector<int> total(cache.gt_cars.size(), 0);
  for (int slot : slots) {
    for (std::size_t o = 0; o < total.size(); ++o) total[o] += cache.counts[slot][o];
  }
  return total;
}

std::vector<int> slots_for(const DatasetManifest& manifest, std::span<const int> ids) {
  std::vector<int> slots;
  for (int id : ids) {
    const auto it = std::find(manifest.sensor_ids.begin(), manifest.sensor_ids.end(), id);
    if (it == manifest.sensor_ids.end()) {
      throw std::invalid_argument("unknown sensor id " + std::to_string(id));
    }
    slots.push_back(static_cast<int>(it - manifest.sensor_ids.begin()));
  }
  return slots;
}

int resolve_frames(const ExperimentSpec& spec, const DatasetManifest& manifest) {
  const int frames = spec.frames.value_or(manifest.frames);
  if (frames < 1 || frames > manifest.frames) {
    throw std::invalid_argument("requested frame count exceeds the dataset");
  }
  return frames;
}

}  // namespace

std::string format_sensor_set(const std::vector<int>& sensors) {
  std::string out;
  for (std::size_t i = 0; i < sensors.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(sensors[i]);
  }
  return out;
}

DatasetManifest read_manifest(const std::filesystem::path& dataset_dir) {
  const auto path = dataset_dir / "manifest.json";
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("missing dataset: cannot open " + path.string());
  }
  const nlohmann::json j = nlohmann::json::parse(in);
  DatasetManifest manifest;
  manifest.frames = j.at("frames").get<int>();
  manifest.seed = j.at("seed").get<std::uint64_t>();
  manifest.sensor_ids = j.at("sensor_ids").get<std::vector<int>>();
  manifest.bundle = bundle_from_json(j.at("bundle"));
  return manifest;
}

void cmd_generate(const ExperimentSpec& spec) {
  if (!spec.frames || *spec.frames < 1) {
    throw std::invalid_argument("generate: a positive --frames count is required");
  }
  const int frames = *spec.frames;
  const std::uint64_t seed = spec.seed.value_or(0);
  spec.bundle.scenario.validate();
  std::filesystem::create_directories(spec.out_dir);

  ObjectSimulator sim(spec.bundle.scenario, seed);
  for (int f = 0; f < frames; ++f) {
    const auto& objects = sim.objects_at(f);
    const Frame frame = render_frame(spec.bundle.scenario, objects, f, seed);
    for (std::size_t s = 0; s < spec.bundle.scenario.sensors.size(); ++s) {
      save_pointcloud(cloud_path(spec.out_dir, f, spec.bundle.scenario.sensors[s].id),
                      frame.clouds_global[s]);
    }
    save_ground_truth(ground_truth_path(spec.out_dir, f), objects);
  }

  nlohmann::json manifest;
  manifest["format_version"] = 1;
  manifest["frames"] = frames;
  manifest["seed"] = seed;
  std::vector<int> ids;
  for (const auto& s : spec.bundle.scenario.sensors) ids.push_back(s.id);
  manifest["sensor_ids"] = ids;
  manifest["bundle"] = bundle_to_json(spec.bundle);
  std::ofstream out(spec.out_dir / "manifest.json", std::ios::trunc);
  if (!out) throw std::runtime_error("generate: cannot write manifest");
  out << manifest.dump(2) << '\n';
}

CompareReport cmd_compare_schemes(const ExperimentSpec& spec) {
  const DatasetManifest manifest = read_manifest(spec.out_dir);
  const ScenarioBundle& bundle = spec.bundle;
  const int frames = resolve_frames(spec, manifest);
  const std::uint64_t seed = spec.seed.value_or(manifest.seed);
  const OracleDetector oracle(bundle.detector, seed);

  CompareReport report;
  report.frames = frames;
  const std::size_t sensors = manifest.sensor_ids.size();

  struct SchemeState {
    std::vector<EvalFrame> eval;
    std::vector<std::vector<SensorPayload>> payloads;
    double ms_total{0};
  };
  std::map<FusionScheme, SchemeState> state;
  for (FusionScheme scheme : spec.schemes) state[scheme];

  const bool want_early = state.count(FusionScheme::early) > 0;
  const bool want_late = state.count(FusionScheme::late) > 0;
  const bool want_hybrid = state.count(FusionScheme::hybrid) > 0;

  for (int f = 0; f < frames; ++f) {
    std::vector<PointCloud> cropped;
    const FrameCache cache =
        build_frame_cache(spec.out_dir, manifest, bundle, oracle, f, &cropped);
    const DetectionContext fused_ctx{f, cache.gt_cars, std::nullopt};

    if (want_early) {
      auto& st = state[FusionScheme::early];
      const auto start = Clock::now();
      const PointCloud fused = early_fuse(cropped);
      std::vector<Detection> dets = oracle.detect(fused, fused_ctx);
      st.ms_total += ms_since(start);
      std::vector<SensorPayload> payload(sensors);
      for (std::size_t s = 0; s < sensors; ++s) payload[s].points = cache.cropped_points[s];
      st.payloads.push_back(std::move(payload));
      st.eval.push_back({cache.gt_boxes, std::move(dets)});
    }

    if (want_late) {
      auto& st = state[FusionScheme::late];
      const auto start = Clock::now();
      std::vector<Detection> dets = late_fuse(cache.sensor_dets, bundle.fusion);
      st.ms_total += ms_since(start);
      std::vector<SensorPayload> payload(sensors);
      for (std::size_t s = 0; s < sensors; ++s) {
        payload[s].boxes = static_cast<long>(cache.sensor_dets[s].size());
      }
      st.payloads.push_back(std::move(payload));
      st.eval.push_back({cache.gt_boxes, std::move(dets)});
    }

    if (want_hybrid) {
      auto& st = state[FusionScheme::hybrid];
      const auto start = Clock::now();
      std::vector<SensorObservation> observations(sensors);
      for (std::size_t s = 0; s < sensors; ++s) {
        observations[s].sensor_xy = bundle.scenario.sensors[s].position_xy();
        observations[s].detections = cache.sensor_dets[s];
        observations[s].cloud = std::move(cropped[s]);
      }
      std::vector<Detection> dets =
          hybrid_fuse(observations, bundle.fusion, oracle, fused_ctx);
      st.ms_total += ms_since(start);
      std::vector<SensorPayload> payload(sensors);
      for (std::size_t s = 0; s < sensors; ++s) {
        long far = 0;
        for (const auto& p : observations[s].cloud.points) {
          if ((p.head<2>() - observations[s].sensor_xy).norm() > bundle.fusion.hybrid_radius) {
            ++far;
          }
        }
        payload[s].points = far;
        payload[s].boxes = static_cast<long>(cache.sensor_dets[s].size());
      }
      st.payloads.push_back(std::move(payload));
      st.eval.push_back({cache.gt_boxes, std::move(dets)});
    }
  }

  for (FusionScheme scheme : spec.schemes) {
    auto& st = state[scheme];
    SchemeResult row;
    row.scheme = scheme;
    for (double kappa : spec.kappas) {
      row.ap_by_kappa[kappa] = average_precision(st.eval, kappa);
    }
    row.mean_cost_kbit_per_sensor_frame =
        cost_of_frames(scheme, st.payloads, EncodingConfig{}).mean_kbit_per_sensor_frame;
    row.mean_ms_per_frame = st.ms_total / frames;
    report.rows.push_back(std::move(row));
  }

  std::filesystem::create_directories(spec.out_dir);
  auto ap_table = open_table(spec.out_dir / "compare_ap.tsv");
  ap_table << "scheme\tkappa\tap\n";
  for (const auto& row : report.rows) {
    for (const auto& [kappa, ap] : row.ap_by_kappa) {
      ap_table << to_string(row.scheme) << '\t' << metric(kappa) << '\t' << metric(ap)
               << '\n';
    }
  }
  auto cost_table = open_table(spec.out_dir / "compare_cost.tsv");
  cost_table << "scheme\tkbit_per_sensor_frame\n";
  for (const auto& row : report.rows) {
    cost_table << to_string(row.scheme) << '\t'
               << metric(row.mean_cost_kbit_per_sensor_frame) << '\n';
  }
  // Timing varies run to run, so it lives in its own file and the two
  // tables above stay reproducible byte for byte.
  auto timing_table = open_table(spec.out_dir / "compare_timing.tsv");
  timing_table << "scheme\tms_per_frame\n";
  for (const auto& row : report.rows) {
    timing_table << to_string(row.scheme) << '\t' << metric(row.mean_ms_per_frame) << '\n';
  }
  return report;
}

SweepReport cmd_sensor_sweep(const ExperimentSpec& spec) {
  const DatasetManifest manifest = read_manifest(spec.out_dir);
  const ScenarioBundle& bundle = spec.bundle;
  const int frames = resolve_frames(spec, manifest);
  const std::uint64_t seed = spec.seed.value_or(manifest.seed);
  const OracleDetector oracle(bundle.detector, seed);

  std::vector<FrameCache> caches;
  caches.reserve(frames);
  for (int f = 0; f < frames; ++f) {
    caches.push_back(build_frame_cache(spec.out_dir, manifest, bundle, oracle, f));
  }

  std::vector<std::vector<int>> sets = spec.sensor_sets;
  if (sets.empty()) {
    const std::size_t n = manifest.sensor_ids.size();
    if (n > 8) {
      throw std::invalid_argument("sweep: all-subsets mode is capped at 8 sensors");
    }
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
      std::vector<int> ids;
      for (std::size_t s = 0; s < n; ++s) {
        if (mask & (1u << s)) ids.push_back(manifest.sensor_ids[s]);
      }
      sets.push_back(std::move(ids));
    }
    std::sort(sets.begin(), sets.end(), [](const auto& a, const auto& b) {
      if (a.size() != b.size()) return a.size() < b.size();
      return a < b;
    });
  }

  SweepReport report;
  report.kappa = spec.kappas.empty() ? 0.7 : spec.kappas.front();
  std::map<int, double> best_ap;
  std::map<int, std::vector<EvalFrame>> best_eval;

  for (const auto& ids : sets) {
    const std::vector<int> slots = slots_for(manifest, ids);
    std::vector<EvalFrame> early_eval;
    std::vector<EvalFrame> late_eval;
    early_eval.reserve(caches.size());
    late_eval.reserve(caches.size());
    for (const auto& cache : caches) {
      const DetectionContext ctx{cache.frame_id, cache.gt_cars, std::nullopt};
      early_eval.push_back(
          {cache.gt_boxes, oracle.detect_from_counts(sum_counts(cache, slots), ctx)});
      std::vector<std::vector<Detection>> lists;
      lists.reserve(slots.size());
      for (int slot : slots) lists.push_back(cache.sensor_dets[slot]);
      late_eval.push_back({cache.gt_boxes, late_fuse(lists, bundle.fusion)});
    }
    SweepRow row;
    row.sensors = ids;
    row.ap_early = average_precision(early_eval, report.kappa);
    row.ap_late = average_precision(late_eval, report.kappa);
    const int cardinality = static_cast<int>(ids.size());
    const double ap = row.ap_early.value_or(-1.0);
    if (!best_ap.count(cardinality) || ap > best_ap[cardinality]) {
      best_ap[cardinality] = ap;
      report.best_set_by_cardinality[cardinality] = ids;
      best_eval[cardinality] = std::move(early_eval);
    }
    report.rows.push_back(std::move(row));
  }
  for (auto& [cardinality, eval] : best_eval) {
    report.best_early_pr[cardinality] = pr_curve(eval, report.kappa);
  }

  std::filesystem::create_directories(spec.out_dir);
  auto table = open_table(spec.out_dir / "sweep.tsv");
  table << "cardinality\tsensors\tap_early\tap_late\n";
  for (const auto& row : report.rows) {
    table << row.sensors.size() << '\t' << format_sensor_set(row.sensors) << '\t'
          << metric(row.ap_early) << '\t' << metric(row.ap_late) << '\n';
  }
  for (const auto& [cardinality, curve] : report.best_early_pr) {
    char name[64];
    std::snprintf(name, sizeof(name), "pr_best_%d.tsv", cardinality);
    auto pr = open_table(spec.out_dir / name);
    pr << "# sensors: " << format_sensor_set(report.best_set_by_cardinality[cardinality])
       << "\ntau\tprecision\trecall\n";
    for (const auto& p : curve.points) {
      pr << metric(p.score) << '\t' << metric(p.precision) << '\t' << metric(p.recall)
         << '\n';
    }
  }
  return report;
}

RoiReport cmd_roi_study(const ExperimentSpec& spec) {
  const DatasetManifest manifest = read_manifest(spec.out_dir);
  const ScenarioBundle& bundle = spec.bundle;
  const int frames = resolve_frames(spec, manifest);
  const std::uint64_t seed = spec.seed.value_or(manifest.seed);
  const OracleDetector oracle(bundle.detector, seed);

  RoiReport report;
  report.roi = spec.roi.value_or(bundle.roi);
  report.kappa = spec.kappas.empty() ? 0.7 : spec.kappas.front();

  const std::vector<std::vector<int>>& pairs =
      spec.sensor_sets.empty() ? bundle.roi_pairs : spec.sensor_sets;
  std::vector<std::vector<int>> sets;
  for (const auto& pair : pairs) {
    if (pair.size() != 2) {
      throw std::invalid_argument("roi: sensor sets must be pairs");
    }
    for (int id : pair) {
      const std::vector<int> single{id};
      if (std::find(sets.begin(), sets.end(), single) == sets.end()) {
        sets.push_back(single);
      }
    }
    if (std::find(sets.begin(), sets.end(), pair) == sets.end()) sets.push_back(pair);
  }

  std::vector<FrameCache> caches;
  caches.reserve(frames);
  for (int f = 0; f < frames; ++f) {
    caches.push_back(build_frame_cache(spec.out_dir, manifest, bundle, oracle, f));
  }

  for (const auto& ids : sets) {
    const std::vector<int> slots = slots_for(manifest, ids);
    std::vector<EvalFrame> eval;
    int gt_count = 0;
    for (const auto& cache : caches) {
      EvalFrame ef;
      std::vector<int> roi_counts;
      const std::vector<int> counts = sum_counts(cache, slots);
      for (std::size_t o = 0; o < cache.gt_boxes.size(); ++o) {
        if (report.roi.contains(cache.gt_boxes[o].center.x(),
                                cache.gt_boxes[o].center.y())) {
          ef.ground_truth.push_back(cache.gt_boxes[o]);
        }
      }
      gt_count += static_cast<int>(ef.ground_truth.size());
      const DetectionContext ctx{cache.frame_id, cache.gt_cars, std::nullopt};
      for (auto& det : oracle.detect_from_counts(counts, ctx)) {
        if (report.roi.contains(det.box.center.x(), det.box.center.y())) {
          ef.detections.push_back(std::move(det));
        }
      }
      eval.push_back(std::move(ef));
    }
    RoiReport::Row row;
    row.sensors = ids;
    row.ground_truth_count = gt_count;
    row.ap = average_precision(eval, report.kappa);
    report.rows.push_back(std::move(row));
  }

  std::filesystem::create_directories(spec.out_dir);
  auto table = open_table(spec.out_dir / "roi.tsv");
  table << "sensors\tap\tground_truth\n";
  for (const auto& row : report.rows) {
    table << format_sensor_set(row.sensors) << '\t' << metric(row.ap) << '\t'
          << row.ground_truth_count << '\n';
  }
  return report;
}

DensityReport cmd_density_analysis(const ExperimentSpec& spec) {
  const DatasetManifest manifest = read_manifest(spec.out_dir);
  const ScenarioBundle& bundle = spec.bundle;
  const int frames = resolve_frames(spec, manifest);
  const std::uint64_t seed = spec.seed.value_or(manifest.seed);
  const OracleDetector oracle(bundle.detector, seed);

  std::vector<std::vector<int>> sets = spec.sensor_sets;
  if (sets.empty()) {
    for (int id : manifest.sensor_ids) sets.push_back({id});
    sets.push_back(manifest.sensor_ids);
  }

  std::vector<FrameCache> caches;
  caches.reserve(frames);
  for (int f = 0; f < frames; ++f) {
    caches.push_back(build_frame_cache(spec.out_dir, manifest, bundle, oracle, f));
  }

  DensityReport report;
  for (const auto& ids : sets) {
    const std::vector<int> slots = slots_for(manifest, ids);
    std::vector<int> densities;
    for (const auto& cache : caches) {
      const std::vector<int> counts = sum_counts(cache, slots);
      densities.insert(densities.end(), counts.begin(), counts.end());
    }
    report.cdfs.push_back({ids, density_cdf(densities)});
  }

  // IOU versus density over the largest requested set: detections come from
  // the calibrated oracle on the fused densities; association uses a
  // permissive threshold so low-quality boxes stay in the statistics.
  const std::vector<int>& full_ids =
      *std::max_element(sets.begin(), sets.end(),
                        [](const auto& a, const auto& b) { return a.size() < b.size(); });
  const std::vector<int> full_slots = slots_for(manifest, full_ids);
  constexpr double kAssociationKappa = 0.1;
  std::vector<std::pair<int, double>> density_iou;
  for (const auto& cache : caches) {
    const std::vector<int> counts = sum_counts(cache, full_slots);
    const DetectionContext ctx{cache.frame_id, cache.gt_cars, std::nullopt};
    const std::vector<Detection> dets = oracle.detect_from_counts(counts, ctx);
    const MatchResult assoc = match(cache.gt_boxes, dets, kAssociationKappa, 0.0);
    for (const auto& pair : assoc.pairs) {
      density_iou.emplace_back(counts[pair.gt_index], pair.iou);
    }
  }
  report.iou_density = iou_vs_density(density_iou, 200);

  std::filesystem::create_directories(spec.out_dir);
  for (const auto& entry : report.cdfs) {
    std::string name = "density_cdf_s";
    for (std::size_t i = 0; i < entry.sensors.size(); ++i) {
      if (i) name += '-';
      name += std::to_string(entry.sensors[i]);
    }
    name += ".tsv";
    auto table = open_table(spec.out_dir / name);
    table << "density\tcdf\n";
    for (const auto& step : entry.cdf.steps) {
      table << step.density << '\t' << metric(step.cumulative) << '\n';
    }
  }
  auto table = open_table(spec.out_dir / "iou_vs_density.tsv");
  table << "bin_center\tmean_iou\tcount\n";
  for (const auto& bin : report.iou_density) {
    table << metric(bin.bin_center) << '\t' << metric(bin.mean_iou) << '\t' << bin.count
          << '\n';
  }
  return report;
}

}  // namespace coopdet
