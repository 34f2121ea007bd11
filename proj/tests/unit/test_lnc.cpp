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

#include <random>
#include <vector>

#include "doctest.h"
#include "pint/lnc.hpp"
#include "pint/sim.hpp"
#include "stats.hpp"

using namespace pint;

TEST_SUITE("lnc") {
  TEST_CASE("coefficients include each hop with probability one half") {
    const int k = 20;
    uint64_t hits = 0;
    const uint64_t n = 20000;
    for (uint64_t p = 0; p < n; ++p) hits += lnc_coefficients(p, k, HashSeed{3}).count();
    CHECK(pint_test::within_sigma(hits / double(n * k), 0.5, double(n * k)));
  }

  TEST_CASE("encode is the xor over the coefficient set") {
    std::mt19937_64 rng(1);
    std::vector<uint64_t> blocks(16);
    for (auto& b : blocks) b = rng();
    for (uint64_t p = 0; p < 500; ++p) {
      const HopMask m = lnc_coefficients(p, 16, HashSeed{4});
      uint64_t x = 0;
      for (int i = 0; i < 16; ++i)
        if (m.test(i)) x ^= blocks[i];
      REQUIRE(lnc_encode(p, blocks, HashSeed{4}) == x);
    }
  }

  TEST_CASE("elimination recovers all blocks at full rank") {
    std::mt19937_64 rng(2);
    for (int k : {1, 3, 16, 64, 130}) {
      std::vector<uint64_t> blocks(k);
      for (auto& b : blocks) b = rng();
      const HashSeed s{static_cast<uint64_t>(k)};
      LncDecoder dec(k);
      for (uint64_t p = 1; !dec.complete(); ++p) dec.add(p, lnc_encode(p, blocks, s), s);
      CHECK_FALSE(dec.inconsistent());
      for (int i = 0; i < k; ++i) CHECK(*dec.block(i) == blocks[i]);
    }
  }

  TEST_CASE("inconsistent rows are flagged") {
    LncDecoder dec(2);
    HopMask a, b;
    a.set(0);
    b.set(0);
    CHECK(dec.add({a, 5}));
    CHECK_FALSE(dec.add({b, 6}));
    CHECK(dec.inconsistent());
  }

  TEST_CASE("single blocks become visible before full rank") {
    LncDecoder dec(3);
    HopMask a, b;
    a.set(0);
    a.set(1);
    b.set(1);
    dec.add({a, 3});
    CHECK_FALSE(dec.block(0).has_value());
    dec.add({b, 1});
    CHECK(*dec.block(0) == 2);
    CHECK(*dec.block(1) == 1);
    CHECK_FALSE(dec.block(2).has_value());
  }

  TEST_CASE("mean packets to full rank matches the exact GF(2) expectation") {
    // Oracle: the rank grows from i to i+1 with probability 1 - 2^(i-k).
    const int k = 16;
    double expected = 0;
    for (int i = 0; i < k; ++i) expected += 1.0 / (1.0 - std::ldexp(1.0, i - k));
    const auto r = monte_carlo(20000, 5, [&](uint64_t s) { return double(run_lnc_trial(k, s)); });
    CHECK(r.summary.mean == doctest::Approx(expected).epsilon(0.02));
  }
}
