# Copyright 2026 The PINT Telemetry Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.


import json

import pint_telemetry as pt


def test_static_round_trip():
    seed = pt.HashSeed(5)
    params = pt.scheme_params(5, "maintext")
    scheme = pt.hashed_scheme(params, 16, 1)
    path = [11, 12, 13, 14, 15]
    obs = [pt.encode_static_path(p, path, scheme, seed) for p in range(1, 300)]
    hops = pt.decode_static(obs, 5, scheme, seed, list(range(1, 101)))
    assert all(h.decoded for h in hops)
    assert [h.value for h in hops] == path


def test_path_trial_is_reproducible():
    scheme = pt.collision_free_scheme(pt.scheme_params(25, "maintext"))
    a = pt.path_trial(25, scheme, 0, 7)
    assert a == pt.path_trial(25, scheme, 0, 7)
    packets, completed, correct = a
    assert completed and correct and packets >= 25


def test_lnc_and_bounds():
    assert pt.lnc_trial(16, 1) >= 16
    assert pt.required_Z(100, 10, 0.02, 16) == 1
    assert abs(pt.loop_fp_bound(15, 1, 32) - 465 / 2**30) < 1e-18
    assert abs(pt.coupon_expectation(25) - 95.4) < 0.1


def test_sketches():
    kll = pt.KllSketch(100, 1)
    for v in range(10000):
        kll.insert(float(v))
    assert abs(kll.quantile(0.5) - 5000) < 300
    ss = pt.SpaceSaving.for_error(0.05)
    for i in range(1000):
        ss.insert(1 if i % 2 else i)
    assert 1 in pt.heavy_hitters(ss, 0.25, 0.05)


def test_compression_and_fixed_point():
    idx = pt.compress_mult(1000.0, 0.025)
    assert abs(pt.decompress_mult(idx, 0.025) / 1000.0 - 1) <= 0.025
    lut = pt.LogLookup(8)
    assert pt.fp_log2(1024, lut) == 10.0
    value, overflow = pt.fp_multiply(300, 70, lut)
    assert not overflow and abs(value / 21000 - 1) < 0.01
    exact, switch = pt.util_update(0.5, 1000, 20000, 1000, lut)
    assert abs(switch / exact - 1) < 0.03


def test_combined_plan():
    plan = json.loads(pt.combined_plan_json())
    assert plan["global_budget"] == 16
    assert [e["queries"] for e in plan["plan"]] == [["path", "latency"], ["path", "hpcc"]]
    assert abs(plan["plan"][0]["probability"] - 15 / 16) < 1e-12
