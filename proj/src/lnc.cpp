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

#include "pint/lnc.hpp"

#include <stdexcept>

namespace pint {

HopMask lnc_coefficients(uint64_t packet_id, int k, HashSeed seed) {
  if (k < 1 || k > HopMask::kMaxBits)
    throw std::invalid_argument("lnc_coefficients: k must be in [1,256]");
  HopMask m;
  const int words = (k + 63) / 64;
  for (int w = 0; w < words; ++w) {
    const uint64_t key[] = {packet_id, static_cast<uint64_t>(w)};
    m.word(w) = hash_words(key, seed, HashRole::kLnc);
  }
  m.truncate(k);
  return m;
}

uint64_t lnc_encode(uint64_t packet_id, std::span<const uint64_t> blocks, HashSeed seed) {
  const HopMask c = lnc_coefficients(packet_id, static_cast<int>(blocks.size()), seed);
  uint64_t d = 0;
  for (int b : c.bits()) d ^= blocks[b];
  return d;
}

LncDecoder::LncDecoder(int k) : k_(k), pivots_(static_cast<size_t>(k)) {
  if (k < 1 || k > HopMask::kMaxBits) throw std::invalid_argument("LncDecoder: k must be in [1,256]");
}

bool LncDecoder::add(const LncRow& input) {
  LncRow row = input;
  row.coeffs.truncate(k_);
  for (int c : row.coeffs.bits()) {
    if (!row.coeffs.test(c) || !pivots_[c]) continue;
    row.coeffs ^= pivots_[c]->coeffs;
    row.payload ^= pivots_[c]->payload;
  }
  const int pivot = row.coeffs.lowest();
  if (pivot < 0) {
    if (row.payload != 0) inconsistent_ = true;
    return false;
  }
  // Clear the new pivot column from the rest of the basis.
  for (auto& p : pivots_) {
    if (p && p->coeffs.test(pivot)) {
      p->coeffs ^= row.coeffs;
      p->payload ^= row.payload;
    }
  }
  pivots_[pivot] = row;
  ++rank_;
  return true;
}

bool LncDecoder::add(uint64_t packet_id, uint64_t digest, HashSeed seed) {
  return add(LncRow{lnc_coefficients(packet_id, k_, seed), digest});
}

std::optional<uint64_t> LncDecoder::block(int i) const {
  if (i < 0 || i >= k_) throw std::out_of_range("LncDecoder::block: index out of range");
  const auto& p = pivots_[i];
  if (p && p->coeffs.count() == 1) return p->payload;
  return std::nullopt;
}

std::vector<std::optional<uint64_t>> LncDecoder::blocks() const {
  std::vector<std::optional<uint64_t>> out;
  out.reserve(k_);
  for (int i = 0; i < k_; ++i) out.push_back(block(i));
  return out;
}

LncResult lnc_decode(std::span<const LncRow> rows, int k) {
  LncDecoder dec(k);
  for (const auto& r : rows) dec.add(r);
  return LncResult{dec.rank(), dec.complete(), dec.blocks()};
}

}  // namespace pint
