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

#include "pint/fixed_point.hpp"

#include <bit>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace pint {

namespace {

bool is_power_of_two(double R) {
  int e = 0;
  return R > 0.0 && std::frexp(R, &e) == 0.5;
}

int log2_of_power(double R) {
  int e = 0;
  std::frexp(R, &e);
  return e - 1;
}

}  // namespace

double FixedPointValue::real() const { return std::ldexp(R * static_cast<double>(repr), -m); }

FixedPointValue fp_encode(double v, double R, int m) {
  if (!is_power_of_two(R)) throw std::invalid_argument("fp_encode: R must be a power of two");
  if (m < 1 || m > 63) throw std::invalid_argument("fp_encode: m must be in [1,63]");
  if (!(v >= 0.0 && v < R)) throw std::invalid_argument("fp_encode: value outside [0,R)");
  const auto repr = static_cast<uint64_t>(std::floor(std::ldexp(v / R, m)));
  return FixedPointValue{std::min(repr, (uint64_t{1} << m) - 1), R, m};
}

LogLookup::LogLookup(int q) : q_(q) {
  if (q < 1 || q > 20) throw std::invalid_argument("LogLookup: q must be in [1,20]");
  const size_t n = size_t{1} << q;
  log_table_.resize(n);
  exp_table_.resize(n);
  for (size_t j = 0; j < n; ++j) {
    const long double f = static_cast<long double>(j) / static_cast<long double>(n);
    log_table_[j] = static_cast<uint64_t>(std::floor(std::log2(1.0L + f) * 0x1p32L));
    exp_table_[j] = static_cast<uint64_t>(std::floor(std::exp2(f) * 0x1p32L));
  }
}

void LogLookup::dump_hex(std::ostream& out) const {
  const auto flags = out.flags();
  out << "# log2 table, q=" << q_ << ", 32 fractional bits\n";
  for (size_t j = 0; j < log_table_.size(); ++j)
    out << std::hex << std::setw(4) << std::setfill('0') << j << ' ' << std::setw(10) << log_table_[j]
        << '\n';
  out << "# exp2 table, q=" << std::dec << q_ << ", 32 fractional bits\n";
  for (size_t j = 0; j < exp_table_.size(); ++j)
    out << std::hex << std::setw(4) << std::setfill('0') << j << ' ' << std::setw(10) << exp_table_[j]
        << '\n';
  out.flags(flags);
}

int64_t log2_fix(uint64_t x, const LogLookup& lut) {
  if (x == 0) throw std::domain_error("log2_fix: log of zero");
  const int q = lut.q();
  const int msb = std::bit_width(x) - 1;
  // The q bits right after the leading one form the table key.
  const uint64_t mantissa = msb >= q ? x >> (msb - q) : x << (q - msb);
  const uint64_t key = mantissa - (uint64_t{1} << q);
  return (static_cast<int64_t>(msb) << kLogFracBits) + static_cast<int64_t>(lut.log_entry(key));
}

Exp2Result exp2_fix(int64_t x, const LogLookup& lut, int out_frac_bits) {
  const int q = lut.q();
  const int64_t ipart = x >> kLogFracBits;  // floor, also for negative x
  const uint64_t frac = static_cast<uint64_t>(x) & ((uint64_t{1} << kLogFracBits) - 1);
  const uint64_t key = frac >> (kLogFracBits - q);
  const uint64_t mant = lut.exp_entry(key);  // in [2^32, 2^33)
  const int64_t shift = ipart + out_frac_bits - kLogFracBits;
  Exp2Result r;
  if (shift >= 0) {
    if (shift > 30) {  // mant has 33 significant bits
      r.overflow = true;
      r.value = UINT64_MAX;
    } else {
      r.value = mant << shift;
    }
  } else {
    r.value = -shift >= 64 ? 0 : mant >> (-shift);
  }
  return r;
}

FixedPointValue fp_log2(uint64_t x, const LogLookup& lut) {
  return FixedPointValue{static_cast<uint64_t>(log2_fix(x, lut)), 64.0, kLogFracBits + 6};
}

Exp2Result fp_exp2(const FixedPointValue& x, const LogLookup& lut, int out_frac_bits) {
  if (!is_power_of_two(x.R)) throw std::invalid_argument("fp_exp2: R must be a power of two");
  // Realign repr to 32 fractional bits; R = 2^e makes this a pure shift.
  const int shift = kLogFracBits + log2_of_power(x.R) - x.m;
  uint64_t fix = 0;
  if (shift >= 0) {
    if (std::bit_width(x.repr) + shift > 62) return Exp2Result{UINT64_MAX, true};
    fix = x.repr << shift;
  } else {
    fix = x.repr >> (-shift);
  }
  return exp2_fix(static_cast<int64_t>(fix), lut, out_frac_bits);
}

Exp2Result fp_multiply(uint64_t a, uint64_t b, const LogLookup& lut, int out_frac_bits) {
  if (a == 0 || b == 0) return Exp2Result{};
  return exp2_fix(log2_fix(a, lut) + log2_fix(b, lut), lut, out_frac_bits);
}

Exp2Result fp_divide(uint64_t a, uint64_t b, const LogLookup& lut, int out_frac_bits) {
  if (b == 0) throw std::domain_error("fp_divide: division by zero");
  if (a == 0) return Exp2Result{};
  return exp2_fix(log2_fix(a, lut) - log2_fix(b, lut), lut, out_frac_bits);
}

}  // namespace pint
