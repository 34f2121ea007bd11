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
#include <sstream>

#include "doctest.h"
#include "pint/topology.hpp"

using namespace pint;

TEST_SUITE("topology") {
  TEST_CASE("parse a small file") {
    std::istringstream in(
        "# test\nswitches: 1 2 3\n  4 5\nlink: 12.5e9 13e-6\npaths:\n  a: 1 2 3\n  b: 5 4\n");
    const Topology t = parse_topology(in, "t.txt");
    CHECK(t.switches.size() == 5);
    CHECK(t.path("a") == std::vector<uint64_t>{1, 2, 3});
    CHECK(t.max_path_length() == 3);
    CHECK(t.link.T_seconds == doctest::Approx(13e-6));
  }

  TEST_CASE("errors carry source and line") {
    std::istringstream dangling("switches: 1 2\npaths:\n  a: 1 7\n");
    try {
      parse_topology(dangling, "f.txt");
      FAIL("expected an error");
    } catch (const std::exception& e) {
      CHECK(std::string(e.what()).find("f.txt:3") != std::string::npos);
    }
    std::istringstream dup("switches: 1 1\n");
    CHECK_THROWS(parse_topology(dup));
    std::istringstream junk("switches: 1 x\n");
    CHECK_THROWS(parse_topology(junk));
  }

  TEST_CASE("fixtures round-trip through the text format") {
    for (const Topology& t : {linear_topology(10, 100, 3), kentucky_like_topology()}) {
      std::stringstream ss;
      write_topology(ss, t);
      const Topology back = parse_topology(ss);
      CHECK(back.switches == t.switches);
      CHECK(back.paths == t.paths);
    }
  }

  TEST_CASE("fixture shapes") {
    const Topology lin = linear_topology(25, 753, 9);
    const auto& p = lin.path("main");
    CHECK(p.size() == 25);
    CHECK(std::set<uint64_t>(p.begin(), p.end()).size() == 25);
    const Topology ky = kentucky_like_topology();
    CHECK(ky.switches.size() == 753);
    CHECK(ky.max_path_length() == 59);
  }
}
