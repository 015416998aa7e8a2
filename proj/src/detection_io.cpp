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

#include "coopdet/detector/detection.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace coopdet {

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void save_detections(const std::filesystem::path& path,
                     std::span<const DetectionRecord> records) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("save_detections: cannot open " + path.string());
  for (const auto& r : records) {
    const auto& b = r.detection.box;
    out << r.frame_id << ' ' << r.sensor_id << ' ' << to_string(b.cls) << ' '
        << format_double(b.center.x()) << ' ' << format_double(b.center.y()) << ' '
        << format_double(b.center.z()) << ' ' << format_double(b.size.x()) << ' '
        << format_double(b.size.y()) << ' ' << format_double(b.size.z()) << ' '
        << format_double(b.yaw) << ' ' << format_double(r.detection.score) << '\n';
  }
  if (!out) throw std::runtime_error("save_detections: write failed for " + path.string());
}

std::vector<DetectionRecord> load_detection_records(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_detections: cannot open " + path.string());
  std::vector<DetectionRecord> records;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fail = [&](const char* what) {
      throw std::runtime_error("load_detections: " + std::string(what) + " at " +
                               path.string() + ":" + std::to_string(line_no));
    };
    std::istringstream ss(line);
    DetectionRecord r;
    std::string cls;
    auto& b = r.detection.box;
    if (!(ss >> r.frame_id >> r.sensor_id >> cls >> b.center.x() >> b.center.y() >>
          b.center.z() >> b.size.x() >> b.size.y() >> b.size.z() >> b.yaw >>
          r.detection.score)) {
      fail("parse error");
    }
    std::string trailing;
    if (ss >> trailing) fail("unexpected trailing token");
    const auto parsed = object_class_from_string(cls);
    if (!parsed) fail("unknown class");
    b.cls = *parsed;
    if (r.detection.score < 0.0 || r.detection.score > 1.0) fail("score out of range");
    if (b.size.minCoeff() <= 0.0) fail("non-positive box size");
    if (r.sensor_id >= 0) r.detection.source_sensor = r.sensor_id;
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<Detection> load_external_detections(const std::filesystem::path& path,
                                                int frame_id, int sensor_id) {
  std::vector<Detection> out;
  for (auto& record : load_detection_records(path)) {
    if (record.frame_id == frame_id && record.sensor_id == sensor_id) {
      out.push_back(std::move(record.detection));
    }
  }
  return out;
}

}  // namespace coopdet
