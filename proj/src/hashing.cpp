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

#include "pint/hashing.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

namespace pint {

uint64_t unit_threshold(double t) {
  if (!(t > 0.0)) return 0;
  if (t >= 1.0) return std::numeric_limits<uint64_t>::max();
  // long double carries a 64-bit mantissa on the targets we build for.
  const long double scaled =
      static_cast<long double>(t) * static_cast<long double>(std::numeric_limits<uint64_t>::max());
  const long double floored = std::floor(scaled);
  if (floored >= 18446744073709551615.0L) return std::numeric_limits<uint64_t>::max();
  return static_cast<uint64_t>(floored);
}

bool UnitHash::at_most(double t) const { return raw <= unit_threshold(t); }

uint64_t stream_key(HashSeed seed, HashRole role) {
  const uint64_t tag = (static_cast<uint64_t>(seed.instance) << 32) | static_cast<uint32_t>(role);
  return mix64(seed.seed ^ mix64(tag + 0x632be59bd9b4e019ULL));
}

uint64_t hash_bytes(std::span<const std::byte> key, HashSeed seed, HashRole role) {
  uint64_t h = stream_key(seed, role);
  size_t pos = 0;
  while (pos + 8 <= key.size()) {
    uint64_t w;
    std::memcpy(&w, key.data() + pos, 8);
    h = absorb(h, w);
    pos += 8;
  }
  // Tail plus length, so that prefixes padded with zeros differ.
  uint64_t tail = 0;
  std::memcpy(&tail, key.data() + pos, key.size() - pos);
  h = absorb(h, tail);
  return absorb(h, static_cast<uint64_t>(key.size()));
}

uint64_t hash_words(std::span<const uint64_t> words, HashSeed seed, HashRole role) {
  uint64_t h = stream_key(seed, role);
  for (uint64_t w : words) h = absorb(h, w);
  return h;
}

UnitHash hash_unit(std::span<const std::byte> key, HashSeed seed, HashRole role) {
  return UnitHash{hash_bytes(key, seed, role)};
}

UnitHash hash_unit(uint64_t key, HashSeed seed, HashRole role) {
  return UnitHash{absorb(stream_key(seed, role), key)};
}

UnitHash hop_hash(uint64_t packet_id, int hop, HashSeed seed) {
  if (hop < 1) throw std::invalid_argument("hop_hash: hop must be >= 1");
  const uint64_t h = absorb(stream_key(seed, HashRole::kHop), packet_id);
  return UnitHash{absorb(h, static_cast<uint64_t>(hop))};
}

uint64_t value_hash(uint64_t value, uint64_t packet_id, int width_bits, HashSeed seed) {
  if (width_bits < 1 || width_bits > 64)
    throw std::invalid_argument("value_hash: width_bits must be in [1,64]");
  const uint64_t h = absorb(absorb(stream_key(seed, HashRole::kValue), value), packet_id);
  return h & low_mask(width_bits);
}

uint64_t value_hash(std::span<const std::byte> value, uint64_t packet_id, int width_bits,
                    HashSeed seed) {
  return value_hash(hash_bytes(value, seed, HashRole::kValue), packet_id, width_bits, seed);
}

}  // namespace pint
