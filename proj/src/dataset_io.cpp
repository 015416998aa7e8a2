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

#include "coopdet/scene/dataset_io.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

static_assert(std::endian::native == std::endian::little,
              "dataset formats are little endian; byte swapping is not implemented");

namespace coopdet {

namespace {

constexpr char kCloudMagic[4] = {'C', 'P', 'P', 'C'};

void write_exact(std::ofstream& out, const void* data, std::size_t bytes) {
  out.write(static_cast<const char*>(data), static_cast<std::streamsize>(bytes));
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void save_pointcloud(const std::filesystem::path& path, const PointCloud& pc) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("save_pointcloud: cannot open " + path.string());
  write_exact(out, kCloudMagic, 4);
  const std::uint16_t version = kPointCloudFormatVersion;
  write_exact(out, &version, sizeof(version));
  const std::uint32_t count = static_cast<std::uint32_t>(pc.points.size());
  write_exact(out, &count, sizeof(count));
  std::vector<float> flat;
  flat.reserve(pc.points.size() * 3);
  for (const auto& p : pc.points) {
    flat.push_back(static_cast<float>(p.x()));
    flat.push_back(static_cast<float>(p.y()));
    flat.push_back(static_cast<float>(p.z()));
  }
  if (!flat.empty()) write_exact(out, flat.data(), flat.size() * sizeof(float));
  if (!out) throw std::runtime_error("save_pointcloud: write failed for " + path.string());
}

PointCloud load_pointcloud(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_pointcloud: cannot open " + path.string());
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kCloudMagic, 4) != 0) {
    throw std::runtime_error("load_pointcloud: bad magic in " + path.string());
  }
  std::uint16_t version = 0;
  in.read(reinterpret_cast<char*>(&version), sizeof(version));
  if (!in || version != kPointCloudFormatVersion) {
    throw std::runtime_error("load_pointcloud: unsupported version in " + path.string());
  }
  std::uint32_t count = 0;
  in.read(reinterpret_cast<char*>(&count), sizeof(count));
  if (!in) throw std::runtime_error("load_pointcloud: truncated header in " + path.string());
  std::vector<float> flat(static_cast<std::size_t>(count) * 3);
  if (count > 0) {
    in.read(reinterpret_cast<char*>(flat.data()),
            static_cast<std::streamsize>(flat.size() * sizeof(float)));
    if (!in) throw std::runtime_error("load_pointcloud: truncated body in " + path.string());
  }
  PointCloud pc;
  pc.frame = CoordinateFrame::global;
  pc.points.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    pc.points.emplace_back(flat[3 * i], flat[3 * i + 1], flat[3 * i + 2]);
  }
  return pc;
}

void save_ground_truth(const std::filesystem::path& path,
                       std::span<const GroundTruthObject> objects) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("save_ground_truth: cannot open " + path.string());
  for (const auto& obj : objects) {
    const auto& b = obj.box;
    out << obj.object_id << ' ' << to_string(b.cls) << ' '
        << format_double(b.center.x()) << ' ' << format_double(b.center.y()) << ' '
        << format_double(b.center.z()) << ' ' << format_double(b.size.x()) << ' '
        << format_double(b.size.y()) << ' ' << format_double(b.size.z()) << ' '
        << format_double(b.yaw) << '\n';
  }
  if (!out) throw std::runtime_error("save_ground_truth: write failed for " + path.string());
}

std::vector<GroundTruthObject> load_ground_truth(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_ground_truth: cannot open " + path.string());
  std::vector<GroundTruthObject> objects;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ss(line);
    GroundTruthObject obj;
    std::string cls;
    double yaw = 0;
    if (!(ss >> obj.object_id >> cls >> obj.box.center.x() >> obj.box.center.y() >>
          obj.box.center.z() >> obj.box.size.x() >> obj.box.size.y() >>
          obj.box.size.z() >> yaw)) {
      throw std::runtime_error("load_ground_truth: parse error at " + path.string() +
                               ":" + std::to_string(line_no));
    }
    const auto parsed = object_class_from_string(cls);
    if (!parsed) {
      throw std::runtime_error("load_ground_truth: unknown class at " + path.string() +
                               ":" + std::to_string(line_no));
    }
    obj.box.cls = *parsed;
    obj.box.yaw = yaw;
    objects.push_back(obj);
  }
  return objects;
}

std::filesystem::path cloud_path(const std::filesystem::path& dir, int frame_id,
                                 int sensor_id) {
  char name[64];
  std::snprintf(name, sizeof(name), "cloud_%06d_s%d.cppc", frame_id, sensor_id);
  return dir / name;
}

std::filesystem::path ground_truth_path(const std::filesystem::path& dir, int frame_id) {
  char name[64];
  std::snprintf(name, sizeof(name), "gt_%06d.txt", frame_id);
  return dir / name;
}

}  // namespace coopdet
