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
#include <vector>

#include "pint/hashing.hpp"

namespace pint {

// Multiplicative compression: index = round(log_{(1+eps)^2} v), v >= 1.
uint64_t compress_mult(double v, double eps);
double decompress_mult(uint64_t index, double eps);

/// Real-valued exponent log_{(1+eps)^2} v that the rounding schemes target.
double mult_exponent(double v, double eps);

/// Probability that the randomized variant rounds up, i.e. the fractional
/// part of mult_exponent(v, eps). E[index] = floor + this, exactly.
double randomized_ceiling_probability(double v, double eps);

/// Floor or ceiling of the exponent, chosen by a per-packet hash so that the
/// expected index equals the exponent.
uint64_t compress_mult_randomized(double v, double eps, uint64_t packet_id, HashSeed seed);

// Additive compression: index = round(v / 2delta), |decompress - v| <= delta.
uint64_t compress_add(double v, double delta);
double decompress_add(uint64_t index, double delta);
/// Bits saved relative to sending the exact integer value.
int additive_bits_saved(double delta);

/// Bits needed to carry indices 0..max_index.
int bits_for_index(uint64_t max_index);

/// Largest power-of-(1+eps)^2 index for values up to vmax.
uint64_t max_mult_index(double vmax, double eps);

/// Combining rule for per-packet max: indices are monotone in value.
constexpr uint64_t per_packet_max(uint64_t digest_index, uint64_t local_index) {
  return digest_index > local_index ? digest_index : local_index;
}

/// Multiplicative codec over a bounded value range [lo, hi] with a fixed
/// index width. Values are scaled by lo so that lo maps to index 0.
struct MultCodec {
  double eps = 0.025;
  double lo = 0x1p-10;
  double hi = 0x1p6;
  int bits = 8;

  struct Encoded {
    uint64_t index = 0;
    bool clamped = false;
  };

  uint64_t max_index() const;
  /// Throws unless the range fits in `bits`.
  void validate() const;
  Encoded encode(double v) const;
  Encoded encode_randomized(double v, uint64_t packet_id, HashSeed seed) const;
  double decode(uint64_t index) const;
};

/// Approximate counter storing only an exponent. Each increment advances
/// the exponent with probability (1+a)^-X, with a = 2 eps^2, which gives
/// relative standard error about eps and the unbiased estimate
/// ((1+a)^X - 1) / a.
class MorrisCounter {
 public:
  explicit MorrisCounter(double eps = 0.1, int bits = 16);

  /// Coins come from the hash of (key, seed); callers pass a fresh key per
  /// increment (e.g. the packet id).
  void increment(uint64_t key, HashSeed seed);
  double estimate() const;

  int exponent() const { return x_; }
  double base() const { return 1.0 + a_; }
  double a() const { return a_; }
  int bits() const { return bits_; }

  static double estimate_for(int exponent, double a);
  /// Probability distribution of the exponent after n increments.
  static std::vector<double> exponent_distribution(uint64_t n, double a);
  /// Bits for the exponent when counting up to max_count at error eps.
  static int bits_needed(double eps, double max_count);

 private:
  double a_;
  int bits_;
  int x_ = 0;
};

}  // namespace pint
