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

#include "pint/approx.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace pint {

namespace {

void check_eps(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps must lie in (0,1)");
}

}  // namespace

double mult_exponent(double v, double eps) {
  check_eps(eps);
  if (!(v >= 1.0)) throw std::invalid_argument("multiplicative compression needs v >= 1");
  return std::log(v) / (2.0 * std::log1p(eps));
}

uint64_t compress_mult(double v, double eps) {
  return static_cast<uint64_t>(std::llround(mult_exponent(v, eps)));
}

double decompress_mult(uint64_t index, double eps) {
  check_eps(eps);
  return std::exp(2.0 * std::log1p(eps) * static_cast<double>(index));
}

double randomized_ceiling_probability(double v, double eps) {
  const double x = mult_exponent(v, eps);
  return x - std::floor(x);
}

uint64_t compress_mult_randomized(double v, double eps, uint64_t packet_id, HashSeed seed) {
  const double x = mult_exponent(v, eps);
  const double fl = std::floor(x);
  const double frac = x - fl;
  const bool up = hash_unit(packet_id, seed, HashRole::kRounding).as_unit() < frac;
  return static_cast<uint64_t>(fl) + (up ? 1 : 0);
}

uint64_t compress_add(double v, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("compress_add: delta must be > 0");
  if (!(v >= 0.0)) throw std::invalid_argument("compress_add: v must be >= 0");
  return static_cast<uint64_t>(std::llround(v / (2.0 * delta)));
}

double decompress_add(uint64_t index, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("decompress_add: delta must be > 0");
  return 2.0 * delta * static_cast<double>(index);
}

int additive_bits_saved(double delta) {
  if (!(delta >= 1.0)) return 0;
  return static_cast<int>(std::floor(std::log2(delta)));
}

int bits_for_index(uint64_t max_index) { return std::max(1, static_cast<int>(std::bit_width(max_index))); }

uint64_t max_mult_index(double vmax, double eps) { return compress_mult(vmax, eps); }

// ---------------------------------------------------------------------------

uint64_t MultCodec::max_index() const { return compress_mult(hi / lo, eps); }

void MultCodec::validate() const {
  check_eps(eps);
  if (!(lo > 0.0 && hi > lo)) throw std::invalid_argument("MultCodec: need 0 < lo < hi");
  if (bits < 1 || bits > 63) throw std::invalid_argument("MultCodec: bits must be in [1,63]");
  if (max_index() > low_mask(bits))
    throw std::invalid_argument("MultCodec: value range does not fit in the index width");
}

MultCodec::Encoded MultCodec::encode(double v) const {
  if (v <= lo) return {0, v < lo};
  if (v >= hi) return {max_index(), v > hi};
  return {compress_mult(v / lo, eps), false};
}

MultCodec::Encoded MultCodec::encode_randomized(double v, uint64_t packet_id, HashSeed seed) const {
  if (v <= lo) return {0, v < lo};
  if (v >= hi) return {max_index(), v > hi};
  const uint64_t idx = compress_mult_randomized(v / lo, eps, packet_id, seed);
  return {std::min(idx, max_index()), false};
}

double MultCodec::decode(uint64_t index) const { return lo * decompress_mult(index, eps); }

// ---------------------------------------------------------------------------

MorrisCounter::MorrisCounter(double eps, int bits) : a_(2.0 * eps * eps), bits_(bits) {
  check_eps(eps);
  if (bits < 1 || bits > 31) throw std::invalid_argument("MorrisCounter: bits must be in [1,31]");
}

void MorrisCounter::increment(uint64_t key, HashSeed seed) {
  if (static_cast<uint64_t>(x_) >= low_mask(bits_)) return;  // saturated
  const double p = std::pow(1.0 + a_, -static_cast<double>(x_));
  if (hash_unit(key, seed, HashRole::kMorris).as_unit() < p) ++x_;
}

double MorrisCounter::estimate_for(int exponent, double a) {
  return std::expm1(static_cast<double>(exponent) * std::log1p(a)) / a;
}

double MorrisCounter::estimate() const { return estimate_for(x_, a_); }

std::vector<double> MorrisCounter::exponent_distribution(uint64_t n, double a) {
  std::vector<double> dist(n + 1, 0.0);
  dist[0] = 1.0;
  for (uint64_t step = 0; step < n; ++step) {
    for (uint64_t x = step + 1; x >= 1; --x) {
      const double up = std::pow(1.0 + a, -static_cast<double>(x - 1));
      const double stay = std::pow(1.0 + a, -static_cast<double>(x));
      dist[x] = dist[x] * (1.0 - stay) + dist[x - 1] * up;
    }
    dist[0] = 0.0;  // the first increment always advances
  }
  return dist;
}

int MorrisCounter::bits_needed(double eps, double max_count) {
  const double a = 2.0 * eps * eps;
  const double x = std::log1p(a * max_count) / std::log1p(a);
  return bits_for_index(static_cast<uint64_t>(std::ceil(x)));
}

}  // namespace pint
