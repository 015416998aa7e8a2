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

#ifndef COOPDET_COMMS_COMMS_HPP_
#define COOPDET_COMMS_COMMS_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

#include "coopdet/fusion/fusion.hpp"

namespace coopdet {

/// Cost model for sensor-to-center traffic. The defaults assume 32-bit
/// fields: 3 floats per point, 9 fields per box, and the 13 leading header
/// bytes of the wire format below. These are declared calibration
/// parameters, not measurements.
struct EncodingConfig {
  int bits_per_point{96};
  int bits_per_box{288};
  int header_bits{104};
};

/// What one sensor shipped for one frame.
struct SensorPayload {
  long points{0};
  long boxes{0};
};

/// Bits one sensor spends on one frame under the given scheme: early counts
/// points only, late counts boxes only, hybrid counts far-field points plus
/// boxes; every message pays the header once.
double frame_cost_bits(FusionScheme scheme, const SensorPayload& payload,
                       const EncodingConfig& enc);

struct CostReport {
  FusionScheme scheme{FusionScheme::early};
  double mean_kbit_per_sensor_frame{0};
  std::vector<double> per_sensor_kbit;  // mean over frames, indexed by sensor slot
  int frames{0};
};

/// Averages frame_cost_bits over frames and sensors;
/// payloads[frame][sensor].
CostReport cost_of_frames(FusionScheme scheme,
                          std::span<const std::vector<SensorPayload>> payloads,
                          const EncodingConfig& enc);

// ---------------------------------------------------------------------------
// Wire format (little endian):
//   magic "CPMF" (4 bytes), version u16, frame_id u32, sensor_id u16,
//   payload_type u8 (0 = points, 1 = boxes), payload_length u32 (body bytes),
//   then the body. Point bodies are N * 3 float32; box bodies are N records
//   of (class u32, cx, cy, cz, l, w, h, yaw, score as float32).
// ---------------------------------------------------------------------------

inline constexpr std::uint16_t kWireVersion = 1;

enum class PayloadType : std::uint8_t { points = 0, boxes = 1 };

struct WirePoints {
  std::vector<std::array<float, 3>> xyz;
  bool operator==(const WirePoints&) const = default;
};

struct WireBox {
  std::uint32_t cls{0};
  float cx{0}, cy{0}, cz{0};
  float length{0}, width{0}, height{0};
  float yaw{0};
  float score{0};
  bool operator==(const WireBox&) const = default;
};

struct WireBoxes {
  std::vector<WireBox> boxes;
  bool operator==(const WireBoxes&) const = default;
};

struct WireMessage {
  std::uint32_t frame_id{0};
  std::uint16_t sensor_id{0};
  std::variant<WirePoints, WireBoxes> payload{WirePoints{}};
  bool operator==(const WireMessage&) const = default;
};

class CodecError : public std::runtime_error {
 public:
  enum class Kind { bad_magic, version_mismatch, truncated };

  CodecError(Kind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

std::vector<std::byte> encode_message(const WireMessage& message);

/// Exact inverse of encode_message. Throws CodecError: bad_magic on a wrong
/// leading tag, version_mismatch on an unknown version, truncated whenever
/// the buffer disagrees with its declared payload length.
WireMessage decode_message(std::span<const std::byte> buffer);

WirePoints to_wire_points(const PointCloud& pc);
PointCloud from_wire_points(const WirePoints& wp);
WireBoxes to_wire_boxes(std::span<const Detection> detections);
std::vector<Detection> from_wire_boxes(const WireBoxes& wb, int sensor_id);

/// Ingest stage of the fusion center: accepts messages from any thread and
/// releases a frame batch once every configured sensor has reported for that
/// frame id. Frames are synchronous in simulation, so there is no timeout.
class FrameAssembler {
 public:
  explicit FrameAssembler(std::vector<int> sensor_ids);

  struct Batch {
    std::uint32_t frame_id{0};
    std::map<int, WireMessage> by_sensor;
  };

  /// Returns the completed batch when `message` is the last one missing.
  std::optional<Batch> add(WireMessage message);

  std::size_t pending_frames() const;

 private:
  std::vector<int> sensor_ids_;
  mutable std::mutex mutex_;
  std::map<std::uint32_t, Batch> pending_;
};

}  // namespace coopdet

#endif  // COOPDET_COMMS_COMMS_HPP_
