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

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pint/hashing.hpp"
#include "pint/hop_mask.hpp"

namespace pint {

/// One GF(2) equation: the xor of the blocks selected by `coeffs` equals `payload`.
struct LncRow {
  HopMask coeffs;
  uint64_t payload = 0;
};

/// Coefficient vector for a packet: each of the k hops is included with
/// probability 1/2, derived from the global hash.
HopMask lnc_coefficients(uint64_t packet_id, int k, HashSeed seed);

/// Digest the path would produce under the random-coefficient code.
uint64_t lnc_encode(uint64_t packet_id, std::span<const uint64_t> blocks, HashSeed seed);

/// Incremental Gaussian elimination over GF(2). The basis is kept in reduced
/// row echelon form so individually determined blocks are visible before
/// full rank is reached.
class LncDecoder {
 public:
  explicit LncDecoder(int k);

  /// Returns true when the row increased the rank.
  bool add(const LncRow& row);
  bool add(uint64_t packet_id, uint64_t digest, HashSeed seed);

  int rank() const { return rank_; }
  int path_length() const { return k_; }
  bool complete() const { return rank_ == k_; }
  /// Set when a dependent row disagreed with the basis.
  bool inconsistent() const { return inconsistent_; }

  /// Value of block i (0-based) if the current rows pin it down.
  std::optional<uint64_t> block(int i) const;
  std::vector<std::optional<uint64_t>> blocks() const;

 private:
  int k_;
  int rank_ = 0;
  bool inconsistent_ = false;
  std::vector<std::optional<LncRow>> pivots_;  // indexed by pivot column
};

struct LncResult {
  int rank = 0;
  bool complete = false;
  std::vector<std::optional<uint64_t>> blocks;
};

LncResult lnc_decode(std::span<const LncRow> rows, int k);

}  // namespace pint
