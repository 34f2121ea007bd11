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

#include "doctest.h"
#include "pint/hpcc.hpp"

using namespace pint;

TEST_SUITE("hpcc") {
  TEST_CASE("exact update converges to the closed-form fixpoint") {
    LinkState s;
    s.U = 0.0;
    const PacketDequeueEvent ev{1000, 30000, 1e-6};
    for (int i = 0; i < 2000; ++i) s.U = util_update_exact(s, ev);
    CHECK(std::abs(s.U - util_fixpoint(s, ev)) <= 1e-9);
  }

  TEST_CASE("a full window replaces the old estimate") {
    LinkState s;
    s.U = 5.0;
    const PacketDequeueEvent ev{0, 0, s.T};
    CHECK(util_update_exact(s, ev) == 0.0);
  }

  TEST_CASE("switch state conversions") {
    const SwitchLinkState w = SwitchLinkState::from(LinkState{});
    CHECK(w.T_ns == 13000);
    CHECK(w.B_fix == 819200);
    CHECK(w.B_bytes_per_sec() == doctest::Approx(12.5e9));
  }

  TEST_CASE("switch update tracks the exact update within 3%") {
    const LogLookup lut(8);
    std::mt19937_64 rng(2);
    double worst = 0;
    for (int i = 0; i < 20000; ++i) {
      LinkState ex;
      ex.U = std::ldexp(static_cast<double>(rng() % 4096), -10);
      SwitchLinkState sw = SwitchLinkState::from(ex);
      ex.U = sw.U();
      const SwitchDequeueEvent ev{64 + rng() % 1437, rng() % 200000, rng() % (sw.T_ns + 1)};
      const double u_ex = util_update_exact(ex, to_exact(ev));
      const SwitchUpdate up = util_update_switch(sw, ev, lut);
      CHECK_FALSE(up.overflow);
      sw.U_fix = up.U_fix;
      worst = std::max(worst, std::abs(sw.U() - u_ex) / u_ex);
    }
    CHECK(worst <= 0.03);
  }

  TEST_CASE("zero operands short-circuit") {
    const LogLookup lut(8);
    SwitchLinkState sw;
    CHECK(util_update_switch(sw, {0, 0, 100}, lut).U_fix == 0);
  }

  TEST_CASE("utilization codec") {
    const MultCodec c = util_codec();
    CHECK(c.max_index() == 225);
    const auto e = encode_util(0.8, 17, HashSeed{1});
    CHECK(std::abs(decode_util(e.index) / 0.8 - 1) <= 0.052);
  }
}
