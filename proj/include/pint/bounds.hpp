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

namespace pint {

/// Harmonic number H_n. Summed exactly up to 10^6 terms; beyond that the
/// Euler-Maclaurin expansion is used and `asymptotic` is set.
struct Harmonic {
  long double value = 0;
  bool asymptotic = false;
};
Harmonic harmonic(uint64_t n);

/// Samples per hop so that a hashed candidate set of size V shrinks to the
/// true value for all k hops with probability 1 - delta:
/// Z = ceil(-log2(1 - (1 - delta/k)^(1/V)) / b).
int required_Z(uint64_t V, int k, double delta, int b);

/// Packets after which each of k equally likely coupons has been seen at
/// least Z times with probability 1 - delta.
double double_dixie_N(int k, int Z, double delta);

/// E[A] = r (H_r - H_{r-N}): expected draws to see N distinct of r slots.
double partial_coupon_expectation(uint64_t r, uint64_t N);
/// Draws after which N distinct of r slots were seen with probability 1 - delta.
double partial_coupon_bound(uint64_t r, uint64_t N, double delta);

/// Draws after which all but psi K of K coupons were seen with probability 1 - delta.
double partial_coverage_bound(double K, double psi, double delta);

/// Trials N with Pr[Bin(N, p) <= k] <= delta.
double neg_binomial_N(double k, double p, double delta);

/// Exact binomial coefficient as a long double (exact for the magnitudes used).
long double binomial(uint64_t n, uint64_t r);

/// Upper bound on reporting a false loop over a loop-free k-hop path with
/// b-bit hashes and threshold T: 2^-(b(T+1)) sum_{q=2}^{k-T} C(k-q, T).
long double loop_fp_bound(int b, int T, int k);
/// The sum sum_{q=2}^{k-T} C(k-q, T) on its own.
long double loop_fp_collision_sum(int T, int k);

/// Expected packets to collect all k coupons: k H_k.
double coupon_expectation(uint64_t k);

/// Detection-probability expression for a loop of length L entered after B
/// hops, initial TTL M and threshold T:
/// 1 - prod_{j=1}^{C-T} (1 - ln(1 + L/(B + jL))), C = floor((M - B)/L) cycles.
double loop_detect_probability(int M_ttl, int B, int L, int T);

}  // namespace pint
