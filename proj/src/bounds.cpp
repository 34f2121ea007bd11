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

#include "pint/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace pint {

namespace {

constexpr uint64_t kExactHarmonicLimit = 1000000;

void check_delta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0,1)");
}

}  // namespace

Harmonic harmonic(uint64_t n) {
  if (n <= kExactHarmonicLimit) {
    long double s = 0;
    for (uint64_t i = n; i >= 1; --i) s += 1.0L / static_cast<long double>(i);  // small terms first
    return {s, false};
  }
  const long double x = static_cast<long double>(n);
  constexpr long double kGamma = 0.577215664901532860606512090082402431L;
  return {std::log(x) + kGamma + 1.0L / (2 * x) - 1.0L / (12 * x * x) + 1.0L / (120 * x * x * x * x),
          true};
}

int required_Z(uint64_t V, int k, double delta, int b) {
  if (V < 1 || k < 1 || b < 1) throw std::invalid_argument("required_Z: V, k, b must be >= 1");
  check_delta(delta);
  // 1 - (1 - delta/k)^(1/V) computed without cancellation.
  const long double inner = -std::expm1(std::log1p(-static_cast<long double>(delta) / k) / V);
  const long double z = std::ceil(-std::log2(inner) / b);
  return std::max(1, static_cast<int>(z));
}

double double_dixie_N(int k, int Z, double delta) {
  if (k < 1 || Z < 1) throw std::invalid_argument("double_dixie_N: k, Z must be >= 1");
  check_delta(delta);
  const long double a = (Z - 1) + std::log(static_cast<long double>(k) / delta);
  const long double zz = static_cast<long double>(Z - 1);
  return static_cast<double>(k * (a + std::sqrt(a * a - zz * zz / 4)));
}

double partial_coupon_expectation(uint64_t r, uint64_t N) {
  if (N >= r) throw std::invalid_argument("partial_coupon: need N < r");
  return static_cast<double>(static_cast<long double>(r) * (harmonic(r).value - harmonic(r - N).value));
}

double partial_coupon_bound(uint64_t r, uint64_t N, double delta) {
  check_delta(delta);
  const long double ea = partial_coupon_expectation(r, N);
  const long double l = std::log(1.0L / delta);
  const long double rr = static_cast<long double>(r), gap = static_cast<long double>(r - N);
  return static_cast<double>(ea + rr * l / gap + std::sqrt(2 * rr * ea * l / gap));
}

double partial_coverage_bound(double K, double psi, double delta) {
  if (!(psi > 0.0 && psi <= 0.5)) throw std::invalid_argument("partial_coverage_bound: psi in (0,1/2]");
  if (!(K > 0.0)) throw std::invalid_argument("partial_coverage_bound: K must be > 0");
  check_delta(delta);
  const long double lp = std::log(1.0L / psi), ld = std::log(1.0L / delta);
  return static_cast<double>(K * lp + ld / psi + std::sqrt(2.0L * K / psi * lp * ld));
}

double neg_binomial_N(double k, double p, double delta) {
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("neg_binomial_N: p in (0,1]");
  if (!(k >= 0.0)) throw std::invalid_argument("neg_binomial_N: k must be >= 0");
  check_delta(delta);
  const long double ld = std::log(1.0L / delta);
  return static_cast<double>((k + 2 * ld + std::sqrt(2.0L * k * ld)) / p);
}

long double binomial(uint64_t n, uint64_t r) {
  if (r > n) return 0;
  r = std::min(r, n - r);
  long double c = 1;
  for (uint64_t i = 1; i <= r; ++i) c = c * static_cast<long double>(n - r + i) / static_cast<long double>(i);
  return std::round(c);
}

long double loop_fp_collision_sum(int T, int k) {
  if (T < 0 || k < T + 2) throw std::invalid_argument("loop_fp_bound: need T >= 0 and k >= T + 2");
  long double s = 0;
  for (int q = 2; q <= k - T; ++q) s += binomial(static_cast<uint64_t>(k - q), static_cast<uint64_t>(T));
  return s;
}

long double loop_fp_bound(int b, int T, int k) {
  if (b < 1) throw std::invalid_argument("loop_fp_bound: b must be >= 1");
  return std::ldexp(loop_fp_collision_sum(T, k), -b * (T + 1));
}

double coupon_expectation(uint64_t k) {
  return static_cast<double>(static_cast<long double>(k) * harmonic(k).value);
}

double loop_detect_probability(int M_ttl, int B, int L, int T) {
  if (M_ttl < 0 || B < 0 || L < 0 || T < 0) throw std::invalid_argument("loop_detect_probability: negative input");
  if (L == 0) return 0.0;
  const int cycles = (M_ttl - B) / L;
  long double miss = 1;
  for (int j = 1; j <= cycles - T; ++j) {
    const long double e = std::log1p(static_cast<long double>(L) / (B + static_cast<long double>(j) * L));
    miss *= 1 - std::clamp(e, 0.0L, 1.0L);
  }
  return static_cast<double>(1 - miss);
}

}  // namespace pint
