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

#include <cmath>
#include <random>
#include <set>
#include <vector>

#include "doctest.h"
#include "pint/bounds.hpp"
#include "pint/sim.hpp"

using namespace pint;

namespace {

// Reference harmonic sum in the opposite order, for cross-checking.
long double harmonic_ref(uint64_t n) {
  long double s = 0;
  for (uint64_t i = 1; i <= n; ++i) s += 1.0L / static_cast<long double>(i);
  return s;
}

}  // namespace

TEST_SUITE("bounds") {
  TEST_CASE("harmonic numbers") {
    CHECK(harmonic(1).value == 1.0L);
    CHECK(static_cast<double>(harmonic(25).value) == doctest::Approx(static_cast<double>(harmonic_ref(25))));
    CHECK_FALSE(harmonic(1000000).asymptotic);
    const Harmonic big = harmonic(1000001);
    CHECK(big.asymptotic);
    const long double next = harmonic(1000000).value + 1.0L / 1000001;
    CHECK(static_cast<double>(big.value) == doctest::Approx(static_cast<double>(next)).epsilon(1e-12));
  }

  TEST_CASE("required samples per hop") {
    CHECK(required_Z(100, 10, 0.02, 16) == 1);
    // Direct evaluation: -log2(1 - (1 - 0.002)^(1/100)) = 15.6, so ceil gives 16.
    CHECK(required_Z(100, 10, 0.02, 1) == 16);
    CHECK(required_Z(100, 10, 0.05, 1) == 15);
    CHECK(required_Z(1000000, 100, 0.001, 64) == 1);
  }

  TEST_CASE("double dixie cup") {
    const double n = double_dixie_N(10, 1, 0.05);
    CHECK(n == doctest::Approx(10 * 2 * std::log(200.0)));
    CHECK(double_dixie_N(1, 1, 0.05) == doctest::Approx(2 * std::log(20.0)));
    const double a = 2 + std::log(10 / 0.1);
    CHECK(double_dixie_N(10, 3, 0.1) == doctest::Approx(10 * (a + std::sqrt(a * a - 1))));
  }

  TEST_CASE("partial coupon collection") {
    {
      // Direct evaluation with E[A] = r (H_r - H_{r-N}) summed independently.
      double ea = 0;
      for (int i = 117; i <= 232; ++i) ea += 232.0 / i;
      const double l = std::log(10.0);
      CHECK(partial_coupon_bound(232, 116, 0.1) == doctest::Approx(ea + 2 * l + std::sqrt(4 * ea * l)));
    }
    CHECK(partial_coupon_bound(232, 116, 0.05) == doctest::Approx(211.0).epsilon(0.005));
    CHECK(partial_coupon_bound(2, 1, 0.1) >= 1.0);
    CHECK(partial_coupon_expectation(10, 1) == doctest::Approx(1.0));
    CHECK_THROWS(partial_coupon_bound(5, 5, 0.1));
  }

  TEST_CASE("partial coverage and negative binomial") {
    const double K = 100, psi = 0.5, d = 0.1;
    const double direct = K * std::log(2.0) + std::log(10.0) / psi + std::sqrt(2 * K / psi * std::log(2.0) * std::log(10.0));
    CHECK(partial_coverage_bound(K, psi, d) == doctest::Approx(direct));
    CHECK(partial_coverage_bound(K, 0.5, d) <= partial_coverage_bound(K, 0.1, d));
    CHECK_THROWS(partial_coverage_bound(K, 0.6, d));
    CHECK(neg_binomial_N(10, 1.0, 0.05) == doctest::Approx(10 + 2 * std::log(20.0) + std::sqrt(20 * std::log(20.0))));
    CHECK(neg_binomial_N(10, 0.5, 0.999999) == doctest::Approx(20).epsilon(0.01));
  }

  TEST_CASE("loop false report bounds") {
    CHECK(loop_fp_collision_sum(1, 32) == 465);
    CHECK(static_cast<double>(loop_fp_bound(15, 1, 32)) == doctest::Approx(465.0 / std::ldexp(1.0, 30)));
    CHECK(loop_fp_bound(15, 1, 32) < 5e-7L);
    CHECK(loop_fp_collision_sum(5, 7) == 1);
    CHECK(binomial(30, 15) == 155117520);
    CHECK(binomial(3, 5) == 0);
  }

  TEST_CASE("coupon expectation and loop detection probability") {
    CHECK(coupon_expectation(25) == doctest::Approx(95.4).epsilon(0.001));
    CHECK(loop_detect_probability(64, 5, 0, 1) == 0.0);
    const double p = loop_detect_probability(64, 5, 3, 1);
    CHECK(p > 0.0);
    CHECK(p < 1.0);
    CHECK(loop_detect_probability(64, 5, 3, 2) <= p);
  }

  TEST_CASE("bounds dominate their processes (quick)") {
    std::mt19937_64 rng(1);
    const int trials = 2000;
    const int k = 10;
    const double N = double_dixie_N(k, 1, 0.05);
    int ok = 0;
    for (int t = 0; t < trials; ++t) {
      std::set<int> seen;
      int draws = 0;
      while (static_cast<int>(seen.size()) < k) {
        seen.insert(static_cast<int>(rng() % k));
        ++draws;
      }
      ok += draws <= N;
    }
    CHECK(ok >= 0.95 * trials);
  }
}
