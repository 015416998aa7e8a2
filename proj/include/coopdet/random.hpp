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

#ifndef COOPDET_RANDOM_HPP_
#define COOPDET_RANDOM_HPP_

#include <cstdint>
#include <random>

namespace coopdet {

/// splitmix64 finalizer; cheap, well-mixed, platform independent.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t hash_mix(std::uint64_t seed, std::uint64_t value) {
  return splitmix64(seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2)));
}

/// Derives an independent stream seed from a base seed and a path of
/// integers (domain tag, frame id, object id, ...). Streams with different
/// paths never collide in practice.
template <typename... Ids>
constexpr std::uint64_t seed_for(std::uint64_t base, Ids... ids) {
  std::uint64_t h = splitmix64(base);
  ((h = hash_mix(h, static_cast<std::uint64_t>(ids))), ...);
  return h;
}

// Stream domain tags, one per independent consumer of randomness.
inline constexpr std::uint64_t kSpawnDomain = 0x5331;
inline constexpr std::uint64_t kRenderDomain = 0x5332;
inline constexpr std::uint64_t kOracleDomain = 0x5333;
inline constexpr std::uint64_t kVoxelDomain = 0x5334;
inline constexpr std::uint64_t kFalsePositiveDomain = 0x5335;

inline std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

}  // namespace coopdet

#endif  // COOPDET_RANDOM_HPP_
