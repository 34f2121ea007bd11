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
#include <vector>

#include "doctest.h"
#include "pint/approx.hpp"
#include "stats.hpp"

using namespace pint;

TEST_SUITE("approx") {
  TEST_CASE("multiplicative round trip is within 1+eps") {
    std::mt19937_64 rng(1);
    for (double eps : {0.0025, 0.025, 0.1}) {
      for (int i = 0; i < 20000; ++i) {
        const double v = 1.0 + static_cast<double>(rng() >> 32);
        const double back = decompress_mult(compress_mult(v, eps), eps);
        REQUIRE(std::max(back / v, v / back) <= 1.0 + eps + 1e-12);
      }
    }
    CHECK(compress_mult(1.0, 0.1) == 0);
    CHECK_THROWS(compress_mult(0.5, 0.1));
    CHECK_THROWS(compress_mult(2.0, 0.0));
  }

  TEST_CASE("index widths") {
    CHECK(bits_for_index(0) == 1);
    CHECK(bits_for_index(255) == 8);
    CHECK(bits_for_index(256) == 9);
    // 32-bit values at eps = 0.0025 fit in 13 bits.
    CHECK(bits_for_index(max_mult_index(std::ldexp(1.0, 32), 0.0025)) == 13);
  }

  TEST_CASE("randomized rounding is unbiased in the exponent") {
    const double eps = 0.025, v = 37.3;
    const double x = mult_exponent(v, eps);
    double sum = 0;
    const int n = 200000;
    for (int p = 0; p < n; ++p) sum += static_cast<double>(compress_mult_randomized(v, eps, p, HashSeed{2}));
    CHECK(sum / n == doctest::Approx(x).epsilon(0.001));
    CHECK(randomized_ceiling_probability(v, eps) == doctest::Approx(x - std::floor(x)));
  }

  TEST_CASE("additive compression") {
    CHECK(compress_add(10.0, 0.5) == 10);
    CHECK(decompress_add(10, 0.5) == 10.0);
    for (double v = 0; v < 100; v += 0.37) CHECK(std::abs(decompress_add(compress_add(v, 2.0), 2.0) - v) <= 2.0);
    CHECK(additive_bits_saved(8.0) == 3);
    CHECK(additive_bits_saved(0.5) == 0);
  }

  TEST_CASE("per-packet max over indices equals index of the max") {
    const double eps = 0.025;
    std::mt19937_64 rng(4);
    for (int t = 0; t < 1000; ++t) {
      const double a = 1 + rng() % 100000, b = 1 + rng() % 100000;
      CHECK(per_packet_max(compress_mult(a, eps), compress_mult(b, eps)) == compress_mult(std::max(a, b), eps));
    }
  }

  TEST_CASE("codec clamps and round-trips inside its range") {
    MultCodec c;  // [2^-10, 2^6], eps 0.025, 8 bits
    CHECK_NOTHROW(c.validate());
    CHECK(c.max_index() == 225);
    CHECK(c.encode(1e-6).clamped);
    CHECK(c.encode(1e6).index == 225);
    for (double v = 0.001; v < 64; v *= 1.07) {
      const double back = c.decode(c.encode(v).index);
      CHECK(std::max(back / v, v / back) <= 1.025 + 1e-12);
    }
    MultCodec tight = c;
    tight.bits = 7;
    CHECK_THROWS(tight.validate());
  }

  TEST_CASE("Morris counter estimator is unbiased by exact enumeration") {
    for (double eps : {0.1, 0.3}) {
      const double a = 2 * eps * eps;
      for (uint64_t n : {1, 2, 4, 8, 50}) {
        const auto dist = MorrisCounter::exponent_distribution(n, a);
        double mass = 0, mean = 0;
        for (size_t x = 0; x < dist.size(); ++x) {
          mass += dist[x];
          mean += dist[x] * MorrisCounter::estimate_for(static_cast<int>(x), a);
        }
        CHECK(mass == doctest::Approx(1.0));
        CHECK(mean == doctest::Approx(static_cast<double>(n)).epsilon(1e-9));
      }
    }
  }

  TEST_CASE("Morris counter Monte Carlo") {
    CHECK(MorrisCounter().estimate() == 0.0);
    double sum = 0;
    int bad = 0;
    const int trials = 1000;
    for (int t = 0; t < trials; ++t) {
      MorrisCounter c(0.1);
      const HashSeed s{static_cast<uint64_t>(t)};
      for (uint64_t i = 0; i < 10000; ++i) c.increment(i, s);
      sum += c.estimate();
      bad += std::abs(c.estimate() / 1e4 - 1) > 0.3;
    }
    CHECK(std::abs(sum / trials / 1e4 - 1) <= 0.01);
    CHECK(bad <= trials / 100);
    CHECK(MorrisCounter::bits_needed(0.1, 1e4) <= 10);
  }
}
