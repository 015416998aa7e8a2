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

#include "coopdet/comms/comms.hpp"

#include <bit>
#include <cstring>

static_assert(std::endian::native == std::endian::little,
              "the wire format is little endian; byte swapping is not implemented");

namespace coopdet {

namespace {

constexpr char kWireMagic[4] = {'C', 'P', 'M', 'F'};
constexpr std::size_t kHeaderBytes = 4 + 2 + 4 + 2 + 1 + 4;
constexpr std::size_t kPointStride = 3 * sizeof(float);
constexpr std::size_t kBoxStride = sizeof(std::uint32_t) + 8 * sizeof(float);

template <typename T>
void append(std::vector<std::byte>& out, const T& value) {
  const auto* bytes = reinterpret_cast<const std::byte*>(&value);
  out.insert(out.end(), bytes, bytes + sizeof(T));
}

template <typename T>
T read_at(std::span<const std::byte> buffer, std::size_t offset) {
  T value;
  std::memcpy(&value, buffer.data() + offset, sizeof(T));
  return value;
}

}  // namespace

double frame_cost_bits(FusionScheme scheme, const SensorPayload& payload,
                       const EncodingConfig& enc) {
  double bits = enc.header_bits;
  switch (scheme) {
    case FusionScheme::early:
      bits += static_cast<double>(payload.points) * enc.bits_per_point;
      break;
    case FusionScheme::late:
      bits += static_cast<double>(payload.boxes) * enc.bits_per_box;
      break;
    case FusionScheme::hybrid:
      bits += static_cast<double>(payload.points) * enc.bits_per_point +
              static_cast<double>(payload.boxes) * enc.bits_per_box;
      break;
  }
  return bits;
}

CostReport cost_of_frames(FusionScheme scheme,
                          std::span<const std::vector<SensorPayload>> payloads,
                          const EncodingConfig& enc) {
  CostReport report;
  report.scheme = scheme;
  report.frames = static_cast<int>(payloads.size());
  if (payloads.empty()) return report;
  const std::size_t sensors = payloads.front().size();
  report.per_sensor_kbit.assign(sensors, 0.0);
  double total_kbit = 0.0;
  for (const auto& frame : payloads) {
    for (std::size_t s = 0; s < sensors; ++s) {
      const double kbit = frame_cost_bits(scheme, frame[s], enc) / 1000.0;
      report.per_sensor_kbit[s] += kbit;
      total_kbit += kbit;
    }
  }
  for (double& v : report.per_sensor_kbit) v /= report.frames;
  report.mean_kbit_per_sensor_frame =
      total_kbit / (static_cast<double>(report.frames) * static_cast<double>(sensors));
  return report;
}

std::vector<std::byte> encode_message(const WireMessage& message) {
  std::vector<std::byte> out;
  const bool is_points = std::holds_alternative<WirePoints>(message.payload);
  std::size_t body_bytes = 0;
  if (is_points) {
    body_bytes = std::get<WirePoints>(message.payload).xyz.size() * kPointStride;
  } else {
    body_bytes = std::get<WireBoxes>(message.payload).boxes.size() * kBoxStride;
  }
  out.reserve(kHeaderBytes + body_bytes);

  const auto* magic = reinterpret_cast<const std::byte*>(kWireMagic);
  out.insert(out.end(), magic, magic + 4);
  append(out, kWireVersion);
  append(out, message.frame_id);
  append(out, message.sensor_id);
  append(out, static_cast<std::uint8_t>(is_points ? PayloadType::points : PayloadType::boxes));
  append(out, static_cast<std::uint32_t>(body_bytes));

  if (is_points) {
    for (const auto& p : std::get<WirePoints>(message.payload).xyz) {
      append(out, p[0]);
      append(out, p[1]);
      append(out, p[2]);
    }
  } else {
    for (const auto& b : std::get<WireBoxes>(message.payload).boxes) {
      append(out, b.cls);
      append(out, b.cx);
      append(out, b.cy);
      append(out, b.cz);
      append(out, b.length);
      append(out, b.width);
      append(out, b.height);
      append(out, b.yaw);
      append(out, b.score);
    }
  }
  return out;
}

WireMessage decode_message(std::span<const std::byte> buffer) {
  if (buffer.size() < kHeaderBytes) {
    throw CodecError(CodecError::Kind::truncated, "wire: buffer shorter than header");
  }
  if (std::memcmp(buffer.data(), kWireMagic, 4) != 0) {
    throw CodecError(CodecError::Kind::bad_magic, "wire: bad magic");
  }
  const auto version = read_at<std::uint16_t>(buffer, 4);
  if (version != kWireVersion) {
    throw CodecError(CodecError::Kind::version_mismatch,
                     "wire: unsupported version " + std::to_string(version));
  }
  WireMessage message;
  message.frame_id = read_at<std::uint32_t>(buffer, 6);
  message.sensor_id = read_at<std::uint16_t>(buffer, 10);
  const auto type = read_at<std::uint8_t>(buffer, 12);
  const auto body_bytes = read_at<std::uint32_t>(buffer, 13);
  if (buffer.size() != kHeaderBytes + body_bytes) {
    throw CodecError(CodecError::Kind::truncated,
                     "wire: payload length disagrees with buffer size");
  }
  const std::span<const std::byte> body = buffer.subspan(kHeaderBytes);
  if (type == static_cast<std::uint8_t>(PayloadType::points)) {
    if (body_bytes % kPointStride != 0) {
      throw CodecError(CodecError::Kind::truncated, "wire: partial point record");
    }
    WirePoints points;
    points.xyz.resize(body_bytes / kPointStride);
    for (std::size_t i = 0; i < points.xyz.size(); ++i) {
      points.xyz[i] = {read_at<float>(body, i * kPointStride),
                       read_at<float>(body, i * kPointStride + 4),
                       read_at<float>(body, i * kPointStride + 8)};
    }
    message.payload = std::move(points);
  } else if (type == static_cast<std::uint8_t>(PayloadType::boxes)) {
    if (body_bytes % kBoxStride != 0) {
      throw CodecError(CodecError::Kind::truncated, "wire: partial box record");
    }
    WireBoxes boxes;
    boxes.boxes.resize(body_bytes / kBoxStride);
    for (std::size_t i = 0; i < boxes.boxes.size(); ++i) {
      const std::size_t at = i * kBoxStride;
      WireBox& b = boxes.boxes[i];
      b.cls = read_at<std::uint32_t>(body, at);
      b.cx = read_at<float>(body, at + 4);
      b.cy = read_at<float>(body, at + 8);
      b.cz = read_at<float>(body, at + 12);
      b.length = read_at<float>(body, at + 16);
      b.width = read_at<float>(body, at + 20);
      b.height = read_at<float>(body, at + 24);
      b.yaw = read_at<float>(body, at + 28);
      b.score = read_at<float>(body, at + 32);
    }
    message.payload = std::move(boxes);
  } else {
    throw CodecError(CodecError::Kind::truncated,
                     "wire: unknown payload type " + std::to_string(type));
  }
  return message;
}

WirePoints to_wire_points(const PointCloud& pc) {
  WirePoints wp;
  wp.xyz.reserve(pc.points.size());
  for (const auto& p : pc.points) {
    wp.xyz.push_back({static_cast<float>(p.x()), static_cast<float>(p.y()),
                      static_cast<float>(p.z())});
  }
  return wp;
}

PointCloud from_wire_points(const WirePoints& wp) {
  PointCloud pc;
  pc.frame = CoordinateFrame::global;
  pc.points.reserve(wp.xyz.size());
  for (const auto& p : wp.xyz) {
    pc.points.emplace_back(p[0], p[1], p[2]);
  }
  return pc;
}

WireBoxes to_wire_boxes(std::span<const Detection> detections) {
  WireBoxes wb;
  wb.boxes.reserve(detections.size());
  for (const auto& d : detections) {
    WireBox b;
    b.cls = static_cast<std::uint32_t>(d.box.cls);
    b.cx = static_cast<float>(d.box.center.x());
    b.cy = static_cast<float>(d.box.center.y());
    b.cz = static_cast<float>(d.box.center.z());
    b.length = static_cast<float>(d.box.size.x());
    b.width = static_cast<float>(d.box.size.y());
    b.height = static_cast<float>(d.box.size.z());
    b.yaw = static_cast<float>(d.box.yaw);
    b.score = static_cast<float>(d.score);
    wb.boxes.push_back(b);
  }
  return wb;
}

std::vector<Detection> from_wire_boxes(const WireBoxes& wb, int sensor_id) {
  std::vector<Detection> out;
  out.reserve(wb.boxes.size());
  for (const auto& b : wb.boxes) {
    Detection d;
    d.box.center = {b.cx, b.cy, b.cz};
    d.box.size = {b.length, b.width, b.height};
    d.box.yaw = b.yaw;
    d.box.cls = static_cast<ObjectClass>(b.cls);
    d.score = b.score;
    if (sensor_id >= 0) d.source_sensor = sensor_id;
    out.push_back(d);
  }
  return out;
}

FrameAssembler::FrameAssembler(std::vector<int> sensor_ids)
    : sensor_ids_(std::move(sensor_ids)) {}

std::optional<FrameAssembler::Batch> FrameAssembler::add(WireMessage message) {
  std::lock_guard<std::mutex> lock(mutex_);
  Batch& batch = pending_[message.frame_id];
  batch.frame_id = message.frame_id;
  batch.by_sensor[message.sensor_id] = std::move(message);
  if (batch.by_sensor.size() < sensor_ids_.size()) return std::nullopt;
  for (int id : sensor_ids_) {
    if (!batch.by_sensor.count(id)) return std::nullopt;
  }
  Batch done = std::move(batch);
  pending_.erase(done.frame_id);
  return done;
}

std::size_t FrameAssembler::pending_frames() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return pending_.size();
}

}  // namespace coopdet
