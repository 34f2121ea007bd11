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
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "pint/coding.hpp"
#include "pint/engine.hpp"
#include "stats.hpp"

using namespace pint;

namespace {

QuerySpec simple(int id, const std::string& name, int bits, double freq) {
  QuerySpec q;
  q.id = id;
  q.name = name;
  q.value = ValueKind::kHopLatency;
  q.agg = AggKind::kDynamicPerFlow;
  q.bit_budget = bits;
  q.frequency = freq;
  return q;
}

}  // namespace

TEST_SUITE("engine") {
  TEST_CASE("combined example compiles to two subsets") {
    const QueryFile f = combined_example();
    REQUIRE(f.plan.has_value());
    const auto& e = f.plan->entries;
    REQUIRE(e.size() == 2);
    CHECK(e[0].queries == std::vector<int>{0, 1});
    CHECK(e[0].probability == doctest::Approx(15.0 / 16));
    CHECK(e[1].queries == std::vector<int>{0, 2});
    CHECK(e[1].probability == doctest::Approx(1.0 / 16));
    CHECK(f.plan->frequency_of(0) == doctest::Approx(1.0));
  }

  TEST_CASE("infeasible query sets are rejected with the query name") {
    const std::vector<QuerySpec> qs = {simple(0, "a", 10, 1.0), simple(1, "b", 10, 0.5)};
    try {
      compile_plan(qs, 16);
      FAIL("expected PlanError");
    } catch (const PlanError& e) {
      CHECK(std::string(e.what()).find("'b'") != std::string::npos);
    }
    CHECK_THROWS_AS(compile_plan({simple(0, "a", 20, 1.0)}, 16), PlanError);
    CHECK_THROWS_AS(compile_plan({simple(0, "a", 8, 1.0)}, 65), PlanError);
  }

  TEST_CASE("plans never exceed the budget and meet every frequency") {
    const std::vector<QuerySpec> qs = {simple(0, "a", 8, 0.5), simple(1, "b", 8, 0.5), simple(2, "c", 8, 0.4),
                                      simple(3, "d", 8, 0.3)};
    const ExecutionPlan plan = compile_plan(qs, 16);
    double total = 0;
    for (const auto& e : plan.entries) {
      int bits = 0;
      for (int id : e.queries) bits += qs[id].bit_budget;
      CHECK(bits <= 16);
      total += e.probability;
    }
    CHECK(total == doctest::Approx(1.0));
    for (const auto& q : qs) CHECK(plan.frequency_of(q.id) >= q.frequency - 1e-9);
  }

  TEST_CASE("subset selection follows the plan probabilities") {
    const QueryFile f = combined_example();
    const uint64_t n = 160000;
    uint64_t second = 0;
    for (uint64_t p = 0; p < n; ++p) second += select_subset(p, *f.plan, HashSeed{4}) == 1;
    CHECK(pint_test::within_sigma(second / double(n), 1.0 / 16, n));
  }

  TEST_CASE("slices are contiguous and ordered by query id") {
    const QueryFile f = combined_example();
    const auto sl = layout(f.plan->entries[1], f.queries);
    REQUIRE(sl.size() == 2);
    CHECK(sl[0].query_id == 0);
    CHECK(sl[0].offset == 0);
    CHECK(sl[1].query_id == 2);
    CHECK(sl[1].offset == 8);
    PacketDigest d{0, 16};
    d.set(sl[1], 0xab);
    CHECK(d.get(sl[1]) == 0xab);
    CHECK(d.get(sl[0]) == 0);
    CHECK_THROWS_AS(d.set(sl[1], 0x1ff), BudgetViolation);
    CHECK_THROWS_AS(d.set(Slice{0, 12, 8}, 1), BudgetViolation);
  }

  TEST_CASE("pipeline end to end decodes the path from the sink records") {
    const QueryFile f = combined_example();
    const Pipeline pipe(f.queries, *f.plan, HashSeed{5});
    const std::vector<uint64_t> path = {11, 12, 13, 14, 15};
    std::vector<uint64_t> universe;
    for (uint64_t v = 1; v <= 100; ++v) universe.push_back(v);
    RecordingStore store;
    for (uint64_t pid = 1; pid <= 400; ++pid) {
      Packet pk = pipe.source(pid, "flow", {1, 2, 3});
      CHECK(pk.wire_bits() == 24 + 16);
      for (size_t h = 0; h < path.size(); ++h)
        pipe.switch_process(pk, SwitchContext{path[h], 10.0 + h, 0.5, 0.0});
      const TelemetryRecord r = pipe.sink_extract(pk);
      CHECK(r.hops == 5);
      CHECK_FALSE(pk.digest.has_value());
      store.record(r);
    }
    CHECK(store.size() == 400);
    const QuerySpec& q = pipe.query("path");
    const auto obs = static_observations(store.flow("flow"), q);
    StaticDecoder dec(5, q.static_scheme(), pipe.query_seed(q.id), universe);
    for (const auto& o : obs) dec.add(o);
    REQUIRE(dec.complete());
    CHECK(*dec.values() == path);
  }

  TEST_CASE("a digest of the wrong width trips the budget law") {
    const QueryFile f = combined_example();
    const Pipeline pipe(f.queries, *f.plan, HashSeed{5});
    Packet pk = pipe.source(1, "x");
    pk.digest->width = 24;
    CHECK_THROWS_AS(pipe.switch_process(pk, SwitchContext{1}), BudgetViolation);
  }

  TEST_CASE("query files") {
    std::istringstream in(R"({
      "global_budget": 16,
      "queries": [
        {"name": "path", "value": "switch_id", "agg": "static_per_flow", "bit_budget": 8, "d": 5},
        {"name": "latency", "value": "hop_latency", "agg": "dynamic_per_flow", "bit_budget": 8, "frequency": "15/16"},
        {"name": "hpcc", "value": "link_utilization", "agg": "per_packet", "bit_budget": 8, "frequency": "1/16"}
      ],
      "plan": [
        {"queries": ["path", "latency"], "probability": "15/16"},
        {"queries": ["path", "hpcc"], "probability": "1/16"}
      ]
    })");
    const QueryFile f = parse_query_file(in);
    CHECK(f.queries.size() == 3);
    CHECK(f.queries[1].frequency == doctest::Approx(15.0 / 16));
    REQUIRE(f.plan.has_value());
    CHECK(plan_to_json(*f.plan, f.queries) == plan_to_json(*combined_example().plan, f.queries));

    std::istringstream bad_plan(R"({"queries": [{"name": "a", "value": "hop_latency", "agg": "per_packet",
      "bit_budget": 8}], "plan": [{"queries": ["zz"], "probability": 1}]})");
    CHECK_THROWS_AS(parse_query_file(bad_plan), PlanError);
    std::istringstream bad_json("{ nope");
    CHECK_THROWS(parse_query_file(bad_json));
    std::istringstream bad_kind(R"({"queries": [{"value": "switch_id", "agg": "per_packet", "bit_budget": 8}]})");
    CHECK_THROWS(parse_query_file(bad_kind));
  }
}
