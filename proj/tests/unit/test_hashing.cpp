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

#include <set>
#include <vector>

#include "doctest.h"
#include "pint/hashing.hpp"
#include "stats.hpp"

using namespace pint;

TEST_SUITE("hashing") {
  TEST_CASE("hashes are deterministic and seed dependent") {
    const HashSeed a{7}, b{8}, a1{7, 1};
    CHECK(hop_hash(42, 3, a) == hop_hash(42, 3, a));
    CHECK_FALSE(hop_hash(42, 3, a) == hop_hash(42, 3, b));
    CHECK_FALSE(hop_hash(42, 3, a) == hop_hash(42, 3, a1));
    CHECK(value_hash(5, 9, 16, a) == value_hash(5, 9, 16, a));
  }

  TEST_CASE("roles give independent streams") {
    const HashSeed s{3};
    int same = 0;
    for (uint64_t k = 0; k < 1000; ++k)
      same += hash_unit(k, s, HashRole::kHop).raw == hash_unit(k, s, HashRole::kValue).raw;
    CHECK(same == 0);
  }

  TEST_CASE("value hash respects its width") {
    const HashSeed s{1};
    for (int w : {1, 4, 8, 15, 16, 63, 64})
      for (uint64_t v = 0; v < 200; ++v) {
        const uint64_t h = value_hash(v, v * 31 + 1, w, s);
        if (w < 64) CHECK(h <= low_mask(w));
      }
  }

  TEST_CASE("at_most thresholds are exact at the ends") {
    CHECK(UnitHash{0}.at_most(0.0));
    CHECK_FALSE(UnitHash{1}.at_most(0.0));
    CHECK(UnitHash{~uint64_t{0}}.at_most(1.0));
    CHECK(unit_threshold(0.5) == (uint64_t{1} << 63) - 1);
  }

  TEST_CASE("unit hashes are uniform over 64 cells") {
    std::vector<uint64_t> cells(64, 0);
    const HashSeed s{11};
    for (uint64_t p = 0; p < 200000; ++p) ++cells[hop_hash(p, 1, s).raw >> 58];
    CHECK(pint_test::chi_square_uniform_p(cells) > 0.001);
  }

  TEST_CASE("Bernoulli thresholds match their probability") {
    const HashSeed s{5};
    for (double t : {0.01, 0.25, 0.5, 0.9}) {
      uint64_t hits = 0;
      const uint64_t n = 100000;
      for (uint64_t p = 0; p < n; ++p) hits += hop_hash(p, 2, s).at_most(t);
      CHECK(pint_test::within_sigma(static_cast<double>(hits) / n, t, n));
    }
  }

  TEST_CASE("value hash bits are balanced and pairwise distinct") {
    const HashSeed s{2};
    std::set<uint64_t> seen;
    for (uint64_t v = 0; v < 4096; ++v) seen.insert(value_hash(v, 1234, 64, s));
    CHECK(seen.size() == 4096);
    std::vector<uint64_t> cells(256, 0);
    for (uint64_t v = 0; v < 256 * 400; ++v) ++cells[value_hash(v, 77, 8, s)];
    CHECK(pint_test::chi_square_uniform_p(cells) > 0.001);
  }
}
