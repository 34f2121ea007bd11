// Copyright 2026 The PINT Telemetry Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>

namespace pint {

/// Seed shared between every switch and the inference side. `instance`
/// selects one of several independent copies of the same query.
struct HashSeed {
  uint64_t seed = 0;
  uint32_t instance = 0;

  friend bool operator==(const HashSeed&, const HashSeed&) = default;
};

/// Independent hash streams. Every probabilistic decision draws from its
/// own stream so that, e.g., layer choice and hop sampling never correlate.
enum class HashRole : uint32_t {
  kQuerySelect = 1,
  kHop = 2,
  kValue = 3,
  kFragment = 4,
  kLayer = 5,
  kRounding = 6,
  kMorris = 7,
  kBitVector = 8,
  kLnc = 9,
  kSketch = 10,
  kGeneric = 11,
};

/// A 64-bit hash output interpreted as a point of [0,1).
struct UnitHash {
  uint64_t raw = 0;

  double as_unit() const { return static_cast<double>(raw) * 0x1p-64; }

  // Discrete form of `h <= t`: raw <= floor((2^64 - 1) * t).
  bool at_most(double t) const;

  friend bool operator==(const UnitHash&, const UnitHash&) = default;
};

/// floor((2^64 - 1) * t), saturating at both ends of [0,1].
uint64_t unit_threshold(double t);

/// The 64-bit finalizer all hashes are built from (bijective, full avalanche).
constexpr uint64_t mix64(uint64_t x) {
  x ^= x >> 33;
  x *= 0xff51afd7ed558ccdULL;
  x ^= x >> 33;
  x *= 0xc4ceb9fe1a85ec53ULL;
  x ^= x >> 33;
  return x;
}

/// Key for one (seed, instance, role) stream.
uint64_t stream_key(HashSeed seed, HashRole role);

/// Folds one word into a running hash state.
constexpr uint64_t absorb(uint64_t state, uint64_t word) {
  return mix64(state ^ mix64(word ^ 0x9e3779b97f4a7c15ULL));
}

uint64_t hash_bytes(std::span<const std::byte> key, HashSeed seed, HashRole role);
uint64_t hash_words(std::span<const uint64_t> words, HashSeed seed, HashRole role);

UnitHash hash_unit(std::span<const std::byte> key, HashSeed seed,
                   HashRole role = HashRole::kGeneric);
UnitHash hash_unit(uint64_t key, HashSeed seed, HashRole role = HashRole::kGeneric);

// g(p, i): decides whether hop i acts on packet p. Throws if hop < 1.
UnitHash hop_hash(uint64_t packet_id, int hop, HashSeed seed);

// h(v, p) truncated to width_bits (1..64).
uint64_t value_hash(uint64_t value, uint64_t packet_id, int width_bits, HashSeed seed);
uint64_t value_hash(std::span<const std::byte> value, uint64_t packet_id, int width_bits,
                    HashSeed seed);

constexpr uint64_t low_mask(int bits) {
  return bits >= 64 ? std::numeric_limits<uint64_t>::max() : ((uint64_t{1} << bits) - 1);
}

}  // namespace pint
