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

#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "pint/dynamic_agg.hpp"
#include "pint/sim.hpp"
#include "stats.hpp"

using namespace pint;

TEST_SUITE("dynamic_agg") {
  TEST_CASE("the carried value belongs to the attributed hop") {
    const HashSeed s{6};
    const int k = 9;
    for (uint64_t pid = 0; pid < 5000; ++pid) {
      uint64_t digest = 0;
      for (int h = 1; h <= k; ++h) digest = reservoir_encode(digest, pid, h, 1000 + h, s);
      REQUIRE(digest == 1000 + static_cast<uint64_t>(attribute_hop(pid, k, s)));
    }
  }

  TEST_CASE("hop one always writes") {
    for (uint64_t pid = 0; pid < 100; ++pid) CHECK(reservoir_encode(7, pid, 1, 3, HashSeed{1}) == 3);
    CHECK(attribute_hop(5, 1, HashSeed{1}) == 1);
  }

  TEST_CASE("attribution is uniform over hops") {
    const int k = 10;
    std::vector<uint64_t> cells(k, 0);
    for (uint64_t pid = 0; pid < 100000; ++pid) ++cells[attribute_hop(pid, k, HashSeed{13}) - 1];
    CHECK(pint_test::chi_square_uniform_p(cells) > 0.001);
    for (uint64_t c : cells) CHECK(std::abs(c / 1e5 - 0.1) <= 0.005);
  }

  TEST_CASE("recorder reports insufficient data for unsampled hops") {
    FlowHopRecorder rec(3);
    rec.add(1, 5.0, 5);
    CHECK(rec.samples(1) == 1);
    CHECK(*rec.quantile(1, 0.5) == 5.0);
    CHECK_FALSE(rec.quantile(2, 0.5).has_value());
    CHECK_THROWS(rec.add(4, 1.0, 1));
  }

  TEST_CASE("constant latency gives zero error") {
    DynamicTrialConfig cfg;
    cfg.k = 4;
    cfg.z = 2000;
    cfg.dist = {LatencyModel::kConstant, 42.0, 0.0};
    const DynamicTrialResult r = run_dynamic_trial(cfg, 3);
    for (const auto& hop : r.value_error)
      for (double e : hop) CHECK(e == 0.0);
  }

  TEST_CASE("store exports one row per hop") {
    DynamicStore store;
    auto& f = store.flow("a", 2);
    for (int i = 0; i < 10; ++i) f.add(1, i, i);
    store.flow("b", 1);
    CHECK(store.flows() == 2);
    std::ostringstream out;
    store.export_csv(out);
    const std::string s = out.str();
    CHECK(s.rfind("flow,hop,n,q0.25,q0.5,q0.75,q0.99\n", 0) == 0);
    CHECK(s.find("a,1,10,") != std::string::npos);
    CHECK(s.find("a,2,0,,,,\n") != std::string::npos);
    CHECK(store.find("zz") == nullptr);
  }

  TEST_CASE("per-hop heavy hitters through the recorder") {
    const HeavyHitterTrialResult r = run_heavy_hitter_trial(5, 40000, 0.25, 0.05, 9);
    CHECK(r.all_heavy_reported);
    CHECK(r.no_light_reported);
  }
}
