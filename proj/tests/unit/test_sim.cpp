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
#include <vector>

#include "doctest.h"
#include "pint/bounds.hpp"
#include "pint/coding.hpp"
#include "pint/sim.hpp"

using namespace pint;

TEST_SUITE("sim") {
  TEST_CASE("summary statistics use nearest rank") {
    const Summary one = summarize({7});
    CHECK(one.mean == 7);
    CHECK(one.median == 7);
    CHECK(one.p99 == 7);
    std::vector<double> v;
    for (int i = 1; i <= 100; ++i) v.push_back(i);
    const Summary s = summarize(v);
    CHECK(s.median == 50);
    CHECK(s.p99 == 99);
    CHECK(s.mean == 50.5);
  }

  TEST_CASE("trial i gets seed base xor i and results are reproducible") {
    std::vector<uint64_t> seen;
    const auto r = monte_carlo(5, 100, [&](uint64_t s) {
      seen.push_back(s);
      return static_cast<double>(s);
    });
    CHECK(seen == std::vector<uint64_t>{100, 101, 102, 103, 96});
    const auto trial = [](uint64_t s) {
      StaticTrialConfig cfg;
      cfg.k = 10;
      cfg.scheme = collision_free_scheme(scheme_params(10, Preset::kMainText));
      return static_cast<double>(run_static_trial(cfg, s).packets);
    };
    const auto a = monte_carlo(50, 9, trial), b = monte_carlo(50, 9, trial, 4);
    CHECK(a.values == b.values);
  }

  TEST_CASE("failures carry the replay seed") {
    try {
      run_trials(3, 8, [](uint64_t s) -> double {
        if (s == 9) throw TrialFailure("boom", s);
        return 1.0;
      });
      FAIL("expected TrialFailure");
    } catch (const TrialFailure& e) {
      CHECK(e.seed() == 9);
    }
  }

  TEST_CASE("a one-hop path decodes from its first packet") {
    for (uint64_t s = 0; s < 20; ++s) {
      StaticTrialConfig cfg;
      cfg.k = 1;
      cfg.scheme = collision_free_scheme(scheme_params(1, Preset::kMainText));
      const auto r = run_static_trial(cfg, s);
      CHECK(r.packets == 1);
      CHECK(r.correct);
    }
  }

  TEST_CASE("hybrid needs no more packets than Baseline and grows near-linearly") {
    std::vector<double> means;
    for (int k : {5, 10, 25, 36, 59}) {
      StaticTrialConfig hy, base;
      hy.k = base.k = k;
      hy.scheme = collision_free_scheme(scheme_params(k, Preset::kMainText));
      base.scheme = collision_free_scheme(LayerParams::baseline_only());
      const auto h = monte_carlo(300, 3, [&](uint64_t s) { return double(run_static_trial(hy, s).packets); });
      const auto b = monte_carlo(300, 3, [&](uint64_t s) { return double(run_static_trial(base, s).packets); });
      CHECK(h.summary.mean <= b.summary.mean);
      means.push_back(h.summary.mean / k);
    }
    // Packets per hop stay within a small constant band (k ln k would double it).
    CHECK(means.back() / means.front() < 1.6);
  }

  TEST_CASE("hashed trials decode correctly") {
    StaticTrialConfig cfg;
    cfg.k = 10;
    cfg.universe = 100;
    cfg.scheme = hashed_scheme(scheme_params(10, Preset::kMainText), 8, 2);
    int correct = 0;
    for (uint64_t s = 0; s < 50; ++s) correct += run_static_trial(cfg, s).correct;
    CHECK(correct >= 49);
  }

  TEST_CASE("naive loop detection reports about 0.05% false loops") {
    const uint64_t hits = run_loop_false_positive_trials(32, LoopParams{16, 0}, 200000, 1);
    CHECK(hits / 2e5 == doctest::Approx(0.0005).epsilon(0.5));
  }

  TEST_CASE("genuine loops are caught within T cycles of the first match") {
    const LoopParams lp{15, 1};
    int detected = 0, prompt = 0;
    const int trials = 10000;
    for (int t = 0; t < trials; ++t) {
      const auto r = run_loop_detection_trial(5, 3, 64, lp, t);
      if (!r.detected) continue;
      ++detected;
      prompt += r.detect_hop - r.first_match_hop <= lp.T * 3;
    }
    CHECK(prompt == detected);
    CHECK(detected / double(trials) >= loop_detect_probability(64, 5, 3, 1));
  }

  TEST_CASE("dynamic trials meet the quantile error target") {
    DynamicTrialConfig cfg;
    const DynamicTrialResult r = run_dynamic_trial(cfg, 2);
    CHECK(r.max_rank_error <= 0.1);
  }
}
