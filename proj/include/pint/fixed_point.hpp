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
#include <iosfwd>
#include <vector>

namespace pint {

/// The integer `repr` in {0..2^m-1} stands for R * repr * 2^-m, R a power of two.
struct FixedPointValue {
  uint64_t repr = 0;
  double R = 1.0;
  int m = 16;

  double real() const;
};

FixedPointValue fp_encode(double v, double R, int m);
inline double fp_decode(const FixedPointValue& x) { return x.real(); }

/// Number of fractional bits carried by every log in the emulated path.
inline constexpr int kLogFracBits = 32;

/// Lookup tables for the switch arithmetic. The log table maps the q bits
/// after the leading one to floor(log2(1 + j 2^-q) 2^32); the exp table
/// maps the top q fractional bits of x to floor(2^(j 2^-q) 2^32). Both are
/// built once by the control plane; the data path only indexes them.
class LogLookup {
 public:
  explicit LogLookup(int q = 8);

  int q() const { return q_; }
  uint64_t log_entry(uint64_t j) const { return log_table_[j]; }
  uint64_t exp_entry(uint64_t j) const { return exp_table_[j]; }
  const std::vector<uint64_t>& log_table() const { return log_table_; }
  const std::vector<uint64_t>& exp_table() const { return exp_table_; }

  /// Writes both tables as "index value" hex lines.
  void dump_hex(std::ostream& out) const;

 private:
  int q_;
  std::vector<uint64_t> log_table_;
  std::vector<uint64_t> exp_table_;
};

/// log2(x) in signed fixed point with 32 fractional bits, never above the
/// true value and at most log2(1 + 2^-q) below it. Uses only a leading-bit
/// search, shifts, one table lookup and one add. Throws on x = 0.
int64_t log2_fix(uint64_t x, const LogLookup& lut);

struct Exp2Result {
  uint64_t value = 0;  // 2^x scaled by 2^out_frac_bits
  bool overflow = false;
};

/// 2^x for x in signed fixed point with 32 fractional bits. The result is
/// at most a factor 2^(2^-q) below the true value.
Exp2Result exp2_fix(int64_t x, const LogLookup& lut, int out_frac_bits = 0);

/// log2 of an integer as a FixedPointValue (R = 64, 38 bits: 32 fractional).
FixedPointValue fp_log2(uint64_t x, const LogLookup& lut);
/// 2^x for a non-negative FixedPointValue x, as an integer (floor).
Exp2Result fp_exp2(const FixedPointValue& x, const LogLookup& lut, int out_frac_bits = 0);

/// a * b and a / b via a log-domain add/subtract followed by one exp2.
/// Results carry out_frac_bits fractional bits.
Exp2Result fp_multiply(uint64_t a, uint64_t b, const LogLookup& lut, int out_frac_bits = 0);
Exp2Result fp_divide(uint64_t a, uint64_t b, const LogLookup& lut, int out_frac_bits = 0);

}  // namespace pint
