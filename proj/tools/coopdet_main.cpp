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

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "coopdet/experiment/experiment.hpp"

namespace {

using namespace coopdet;

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, ',')) {
    if (!token.empty()) out.push_back(std::stoi(token));
  }
  return out;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, ',')) {
    if (!token.empty()) out.push_back(std::stod(token));
  }
  return out;
}

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> frames;
  std::string sensors;
  std::string kappas;
  std::optional<double> radius;
  std::string schemes;
  std::string roi;
};

void add_common(CLI::App* cmd, CommonArgs* args, bool config_required) {
  auto* config =
      cmd->add_option("--config", args->config_path, "scenario config file (JSON)");
  if (config_required) config->required();
  cmd->add_option("--out", args->out_dir, "dataset/report directory")->required();
  cmd->add_option("--seed", args->seed, "RNG seed (analysis default: dataset seed)");
  cmd->add_option("--frames", args->frames, "frame count");
  cmd->add_option("--sensors", args->sensors, "comma separated sensor ids");
  cmd->add_option("--kappa", args->kappas, "comma separated IOU thresholds");
  cmd->add_option("--radius", args->radius, "hybrid fusion radius in meters");
  cmd->add_option("--scheme", args->schemes,
                  "comma separated subset of early,late,hybrid");
  cmd->add_option("--roi", args->roi, "ROI rectangle xmin,ymin,xmax,ymax");
}

ExperimentSpec build_spec(const CommonArgs& args, bool need_dataset) {
  ExperimentSpec spec;
  if (!args.config_path.empty()) {
    spec.bundle = load_scenario_file(args.config_path);
  } else if (need_dataset) {
    spec.bundle = read_manifest(args.out_dir).bundle;
  } else {
    throw CLI::ValidationError("--config is required");
  }
  spec.out_dir = args.out_dir;
  spec.seed = args.seed;
  spec.frames = args.frames;
  if (!args.sensors.empty()) spec.sensor_sets = {parse_int_list(args.sensors)};
  if (!args.kappas.empty()) spec.kappas = parse_double_list(args.kappas);
  if (args.radius) spec.bundle.fusion.hybrid_radius = *args.radius;
  if (!args.schemes.empty()) {
    spec.schemes.clear();
    std::stringstream ss(args.schemes);
    std::string token;
    while (std::getline(ss, token, ',')) {
      if (token == "early") {
        spec.schemes.push_back(FusionScheme::early);
      } else if (token == "late") {
        spec.schemes.push_back(FusionScheme::late);
      } else if (token == "hybrid") {
        spec.schemes.push_back(FusionScheme::hybrid);
      } else if (!token.empty()) {
        throw CLI::ValidationError("unknown scheme '" + token + "'");
      }
    }
  }
  if (!args.roi.empty()) {
    const std::vector<double> v = parse_double_list(args.roi);
    if (v.size() != 4) throw CLI::ValidationError("--roi needs xmin,ymin,xmax,ymax");
    spec.roi = Rect{{v[0], v[1]}, {v[2], v[3]}};
  }
  return spec;
}

void print_compare(const CompareReport& report) {
  std::printf("%-8s", "scheme");
  if (!report.rows.empty()) {
    for (const auto& [kappa, ap] : report.rows.front().ap_by_kappa) {
      std::printf("  ap@%-5.2f", kappa);
    }
  }
  std::printf("  %-12s  %-10s\n", "kbit/sensor", "ms/frame");
  for (const auto& row : report.rows) {
    std::printf("%-8s", to_string(row.scheme).c_str());
    for (const auto& [kappa, ap] : row.ap_by_kappa) {
      if (ap) {
        std::printf("  %-8.4f", *ap);
      } else {
        std::printf("  %-8s", "-");
      }
    }
    std::printf("  %-12.3f  %-10.2f\n", row.mean_cost_kbit_per_sensor_frame,
                row.mean_ms_per_frame);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cooperative 3D object detection simulator and fusion benchmark"};
  app.require_subcommand(1);

  CommonArgs gen_args, cmp_args, sweep_args, roi_args, density_args;
  std::string emit_name, emit_out;

  auto* generate = app.add_subcommand("generate", "render a dataset to disk");
  add_common(generate, &gen_args, /*config_required=*/true);

  auto* compare = app.add_subcommand("compare", "compare fusion schemes on a dataset");
  add_common(compare, &cmp_args, /*config_required=*/false);

  auto* sweep = app.add_subcommand("sweep", "evaluate sensor subsets");
  add_common(sweep, &sweep_args, /*config_required=*/false);

  auto* roi = app.add_subcommand("roi", "spatial-diversity study inside a ROI");
  add_common(roi, &roi_args, /*config_required=*/false);

  auto* density = app.add_subcommand("density", "point-density CDF and IOU analysis");
  add_common(density, &density_args, /*config_required=*/false);

  auto* emit = app.add_subcommand("emit-config", "write a built-in scenario config");
  emit->add_option("--name", emit_name, "t_junction or roundabout")->required();
  emit->add_option("--out", emit_out, "output file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (generate->parsed()) {
      cmd_generate(build_spec(gen_args, false));
      std::printf("dataset written to %s\n", gen_args.out_dir.c_str());
    } else if (compare->parsed()) {
      print_compare(cmd_compare_schemes(build_spec(cmp_args, true)));
    } else if (sweep->parsed()) {
      ExperimentSpec spec = build_spec(sweep_args, true);
      // --sensors restricts the sweep to one explicit set; default sweeps all.
      const SweepReport report = cmd_sensor_sweep(spec);
      std::printf("evaluated %zu sensor sets (kappa %.2f); best per cardinality:\n",
                  report.rows.size(), report.kappa);
      for (const auto& [cardinality, ids] : report.best_set_by_cardinality) {
        std::printf("  %d sensors: {%s}\n", cardinality, format_sensor_set(ids).c_str());
      }
    } else if (roi->parsed()) {
      const RoiReport report = cmd_roi_study(build_spec(roi_args, true));
      std::printf("ROI [%.1f,%.1f]x[%.1f,%.1f], kappa %.2f\n", report.roi.min.x(),
                  report.roi.max.x(), report.roi.min.y(), report.roi.max.y(),
                  report.kappa);
      for (const auto& row : report.rows) {
        if (row.ap) {
          std::printf("  sensors {%s}: AP %.4f (%d objects)\n",
                      format_sensor_set(row.sensors).c_str(), *row.ap,
                      row.ground_truth_count);
        } else {
          std::printf("  sensors {%s}: no ground truth in ROI\n",
                      format_sensor_set(row.sensors).c_str());
        }
      }
    } else if (density->parsed()) {
      const DensityReport report = cmd_density_analysis(build_spec(density_args, true));
      for (const auto& entry : report.cdfs) {
        std::printf("  sensors {%s}: F(0) = %.3f\n",
                    format_sensor_set(entry.sensors).c_str(), entry.cdf.at(0));
      }
      std::printf("  iou-vs-density bins: %zu\n", report.iou_density.size());
    } else if (emit->parsed()) {
      ScenarioName name;
      if (emit_name == "t_junction") {
        name = ScenarioName::t_junction;
      } else if (emit_name == "roundabout") {
        name = ScenarioName::roundabout;
      } else {
        std::fprintf(stderr, "unknown scenario '%s'\n", emit_name.c_str());
        return 1;
      }
      save_scenario_file(default_bundle(name), emit_out);
      std::printf("wrote %s\n", emit_out.c_str());
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
