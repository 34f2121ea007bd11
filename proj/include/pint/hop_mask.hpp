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

#include <array>
#include <bit>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace pint {

/// Fixed-capacity set of hop positions 0..255, used where paths fit in a
/// few machine words (GF(2) rows, AND-of-vectors modifier sets).
class HopMask {
 public:
  static constexpr int kMaxBits = 256;
  static constexpr int kWords = kMaxBits / 64;

  void set(int bit) { words_.at(bit >> 6) |= uint64_t{1} << (bit & 63); }
  void reset(int bit) { words_.at(bit >> 6) &= ~(uint64_t{1} << (bit & 63)); }
  bool test(int bit) const { return (words_.at(bit >> 6) >> (bit & 63)) & 1U; }

  int count() const {
    int c = 0;
    for (uint64_t w : words_) c += std::popcount(w);
    return c;
  }
  bool empty() const {
    for (uint64_t w : words_)
      if (w) return false;
    return true;
  }
  // Lowest set bit, or -1 when empty.
  int lowest() const {
    for (int i = 0; i < kWords; ++i)
      if (words_[i]) return i * 64 + std::countr_zero(words_[i]);
    return -1;
  }

  HopMask& operator^=(const HopMask& o) {
    for (int i = 0; i < kWords; ++i) words_[i] ^= o.words_[i];
    return *this;
  }
  HopMask& operator&=(const HopMask& o) {
    for (int i = 0; i < kWords; ++i) words_[i] &= o.words_[i];
    return *this;
  }

  uint64_t& word(int i) { return words_.at(i); }
  uint64_t word(int i) const { return words_.at(i); }

  // Keeps only bits [0, n).
  void truncate(int n) {
    for (int i = 0; i < kWords; ++i) {
      const int lo = i * 64;
      if (n <= lo) words_[i] = 0;
      else if (n < lo + 64) words_[i] &= (uint64_t{1} << (n - lo)) - 1;
    }
  }

  static HopMask all(int n) {
    HopMask m;
    for (auto& w : m.words_) w = ~uint64_t{0};
    m.truncate(n);
    return m;
  }

  std::vector<int> bits() const {
    std::vector<int> out;
    for (int i = 0; i < kWords; ++i) {
      uint64_t w = words_[i];
      while (w) {
        out.push_back(i * 64 + std::countr_zero(w));
        w &= w - 1;
      }
    }
    return out;
  }

  friend bool operator==(const HopMask&, const HopMask&) = default;

 private:
  std::array<uint64_t, kWords> words_{};
};

}  // namespace pint
