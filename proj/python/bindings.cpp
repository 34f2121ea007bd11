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

// Python bindings for the core operations.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "pint/approx.hpp"
#include "pint/bounds.hpp"
#include "pint/coding.hpp"
#include "pint/engine.hpp"
#include "pint/fixed_point.hpp"
#include "pint/hashing.hpp"
#include "pint/hpcc.hpp"
#include "pint/lnc.hpp"
#include "pint/sim.hpp"
#include "pint/sketch.hpp"

namespace py = pybind11;
using namespace pint;

namespace {

HashSeed make_seed(uint64_t seed, uint32_t instance) { return HashSeed{seed, instance}; }

}  // namespace

PYBIND11_MODULE(_pint, m) {
  m.doc() = "Probabilistic in-band network telemetry primitives";

  py::class_<HashSeed>(m, "HashSeed")
      .def(py::init(&make_seed), py::arg("seed") = 0, py::arg("instance") = 0)
      .def_readwrite("seed", &HashSeed::seed)
      .def_readwrite("instance", &HashSeed::instance);

  m.def("mix64", [](uint64_t x) { return mix64(x); });
  m.def("hop_hash", [](uint64_t pid, int hop, const HashSeed& s) { return hop_hash(pid, hop, s).as_unit(); },
        py::arg("packet_id"), py::arg("hop"), py::arg("seed"));
  m.def("value_hash", py::overload_cast<uint64_t, uint64_t, int, HashSeed>(&value_hash), py::arg("value"),
        py::arg("packet_id"), py::arg("bits"), py::arg("seed"));

  // Scheme parameters and static coding.
  py::enum_<Preset>(m, "Preset")
      .value("MAIN_TEXT", Preset::kMainText)
      .value("APPENDIX", Preset::kAppendix)
      .value("REVISED_TAU", Preset::kRevisedTau)
      .value("CUSTOM", Preset::kCustom);
  py::class_<LayerParams>(m, "LayerParams")
      .def(py::init<>())
      .def_readwrite("tau", &LayerParams::tau)
      .def_readwrite("layer_probs", &LayerParams::layer_probs)
      .def_readwrite("d", &LayerParams::d)
      .def("validate", &LayerParams::validate)
      .def_static("baseline_only", &LayerParams::baseline_only)
      .def_static("custom", &LayerParams::custom, py::arg("tau"), py::arg("layer_probs"));
  m.def("scheme_params", [](int d, const std::string& preset) { return scheme_params(d, parse_preset(preset)); },
        py::arg("d"), py::arg("preset") = "maintext");
  m.def("log_star", &log_star);
  m.def("layer_select", &layer_select, py::arg("packet_id"), py::arg("params"), py::arg("seed"));

  py::enum_<BlockMode>(m, "BlockMode").value("HASHED", BlockMode::kHashed).value("RAW", BlockMode::kRaw);
  py::class_<StaticScheme>(m, "StaticScheme")
      .def(py::init<>())
      .def_readwrite("params", &StaticScheme::params)
      .def_readwrite("digest_bits", &StaticScheme::digest_bits)
      .def_readwrite("mode", &StaticScheme::mode)
      .def_readwrite("value_bits", &StaticScheme::value_bits)
      .def_readwrite("instances", &StaticScheme::instances)
      .def("fragments", &StaticScheme::fragments)
      .def("validate", &StaticScheme::validate);
  m.def("collision_free_scheme", &collision_free_scheme);
  m.def("hashed_scheme", &hashed_scheme, py::arg("params"), py::arg("bits"), py::arg("instances") = 1);

  py::class_<CodedObservation>(m, "CodedObservation")
      .def(py::init([](uint64_t pid, uint64_t digest, uint32_t instance) {
             return CodedObservation{pid, digest, instance};
           }),
           py::arg("packet_id"), py::arg("digest"), py::arg("instance") = 0)
      .def_readwrite("packet_id", &CodedObservation::packet_id)
      .def_readwrite("digest", &CodedObservation::digest)
      .def_readwrite("instance", &CodedObservation::instance);
  m.def(
      "encode_static_path",
      [](uint64_t pid, const std::vector<uint64_t>& path, const StaticScheme& scheme, const HashSeed& seed,
         uint32_t instance) {
        return CodedObservation{pid, encode_static_path(pid, path, scheme, seed, instance).bits, instance};
      },
      py::arg("packet_id"), py::arg("path"), py::arg("scheme"), py::arg("seed"), py::arg("instance") = 0,
      "Digest the sink sees after the packet crosses `path`.");

  py::class_<HopResult>(m, "HopResult")
      .def_readonly("decoded", &HopResult::decoded)
      .def_readonly("value", &HopResult::value)
      .def_readonly("candidates", &HopResult::candidates)
      .def_readonly("contradiction", &HopResult::contradiction);
  m.def(
      "decode_static",
      [](const std::vector<CodedObservation>& obs, int k, const StaticScheme& scheme, const HashSeed& seed,
         const std::vector<uint64_t>& candidates) { return decode_static(obs, k, candidates, scheme, seed); },
      py::arg("observations"), py::arg("k"), py::arg("scheme"), py::arg("seed"),
      py::arg("candidates") = std::vector<uint64_t>{});

  // Network coding.
  m.def("lnc_trial", &run_lnc_trial, py::arg("k"), py::arg("seed"), py::arg("max_packets") = 1000000,
        "Packets until the GF(2) system reaches full rank.");

  // Sketches.
  py::class_<KllSketch>(m, "KllSketch")
      .def(py::init<int, uint64_t>(), py::arg("k") = 100, py::arg("seed") = 0)
      .def("insert", &KllSketch::insert)
      .def("merge", &KllSketch::merge)
      .def("quantile", &KllSketch::quantile)
      .def("rank", &KllSketch::rank)
      .def("retained", &KllSketch::retained)
      .def_property_readonly("count", &KllSketch::count);
  py::class_<SpaceSaving>(m, "SpaceSaving")
      .def(py::init<size_t>(), py::arg("capacity"))
      .def_static("for_error", &SpaceSaving::for_error)
      .def("insert", &SpaceSaving::insert, py::arg("item"), py::arg("weight") = 1)
      .def("estimate", &SpaceSaving::estimate)
      .def("above", &SpaceSaving::above)
      .def_property_readonly("count", &SpaceSaving::count);
  m.def("heavy_hitters", &heavy_hitters, py::arg("summary"), py::arg("theta"), py::arg("eps"));

  // Value approximation.
  m.def("compress_mult", &compress_mult, py::arg("value"), py::arg("eps"));
  m.def("decompress_mult", &decompress_mult, py::arg("index"), py::arg("eps"));
  m.def("compress_mult_randomized", &compress_mult_randomized, py::arg("value"), py::arg("eps"),
        py::arg("packet_id"), py::arg("seed"));
  m.def("compress_add", &compress_add, py::arg("value"), py::arg("delta"));
  m.def("decompress_add", &decompress_add, py::arg("index"), py::arg("delta"));
  py::class_<MorrisCounter>(m, "MorrisCounter")
      .def(py::init<double, int>(), py::arg("eps") = 0.1, py::arg("bits") = 16)
      .def("increment", &MorrisCounter::increment, py::arg("key"), py::arg("seed"))
      .def("estimate", &MorrisCounter::estimate)
      .def_property_readonly("exponent", &MorrisCounter::exponent);

  // Fixed-point arithmetic and the switch-side HPCC update.
  py::class_<LogLookup>(m, "LogLookup").def(py::init<int>(), py::arg("q") = 8).def_property_readonly("q", &LogLookup::q);
  py::class_<FixedPointValue>(m, "FixedPointValue")
      .def_readonly("repr", &FixedPointValue::repr)
      .def_readonly("R", &FixedPointValue::R)
      .def_readonly("m", &FixedPointValue::m)
      .def("real", &FixedPointValue::real);
  m.def("fp_encode", &fp_encode, py::arg("value"), py::arg("R"), py::arg("m"));
  m.def("fp_log2", [](uint64_t x, const LogLookup& lut) { return fp_log2(x, lut).real(); }, py::arg("x"),
        py::arg("lut"));
  m.def(
      "fp_multiply",
      [](uint64_t a, uint64_t b, const LogLookup& lut) {
        const Exp2Result r = fp_multiply(a, b, lut);
        return py::make_tuple(r.value, r.overflow);
      },
      py::arg("a"), py::arg("b"), py::arg("lut"), "Approximate a*b; returns (value, overflow).");
  m.def(
      "fp_divide",
      [](uint64_t a, uint64_t b, const LogLookup& lut) {
        const Exp2Result r = fp_divide(a, b, lut);
        return py::make_tuple(r.value, r.overflow);
      },
      py::arg("a"), py::arg("b"), py::arg("lut"));
  m.def(
      "util_update",
      [](double U, uint64_t bytes, uint64_t qlen, uint64_t tau_ns, const LogLookup& lut) {
        LinkState exact;
        exact.U = U;
        SwitchLinkState sw = SwitchLinkState::from(exact);
        const SwitchDequeueEvent ev{bytes, qlen, tau_ns};
        exact.B = sw.B_bytes_per_sec();
        exact.T = sw.T_seconds();
        SwitchLinkState next = sw;
        next.U_fix = util_update_switch(sw, ev, lut).U_fix;
        return py::make_tuple(util_update_exact(exact, to_exact(ev)), next.U());
      },
      py::arg("U"), py::arg("bytes"), py::arg("qlen"), py::arg("tau_ns"), py::arg("lut"),
      "One EWMA step at 100 Gbps; returns (exact, switch) utilization.");

  // Bounds.
  m.def("required_Z", &required_Z, py::arg("V"), py::arg("k"), py::arg("delta"), py::arg("b"));
  m.def("double_dixie_N", &double_dixie_N, py::arg("k"), py::arg("Z"), py::arg("delta"));
  m.def("partial_coupon_bound", &partial_coupon_bound, py::arg("r"), py::arg("N"), py::arg("delta"));
  m.def("partial_coverage_bound", &partial_coverage_bound, py::arg("K"), py::arg("psi"), py::arg("delta"));
  m.def("neg_binomial_N", &neg_binomial_N, py::arg("k"), py::arg("p"), py::arg("delta"));
  m.def("loop_fp_bound", [](int b, int T, int k) { return static_cast<double>(loop_fp_bound(b, T, k)); },
        py::arg("b"), py::arg("T"), py::arg("k"));
  m.def("coupon_expectation", &coupon_expectation);

  // Plans and simulations.
  m.def("combined_plan_json", [] {
    const QueryFile f = combined_example();
    return plan_to_json(*f.plan, f.queries);
  });
  m.def(
      "compile_plan_json",
      [](const std::string& json) {
        std::istringstream in(json);
        const QueryFile f = parse_query_file(in);
        return plan_to_json(compile_plan(f.queries, f.global_budget), f.queries);
      },
      py::arg("query_file_json"));
  m.def(
      "path_trial",
      [](int k, const StaticScheme& scheme, int universe, uint64_t seed) {
        StaticTrialConfig cfg;
        cfg.k = k;
        cfg.scheme = scheme;
        cfg.universe = universe;
        const StaticTrialResult r = run_static_trial(cfg, seed);
        return py::make_tuple(r.packets, r.completed, r.correct);
      },
      py::arg("k"), py::arg("scheme"), py::arg("universe"), py::arg("seed"),
      "One path-tracing trial; returns (packets, completed, correct).");
  m.def("loop_false_positives",
        [](int k, int b, int T, uint64_t trials, uint64_t seed) {
          return run_loop_false_positive_trials(k, LoopParams{b, T}, trials, seed);
        },
        py::arg("k"), py::arg("b"), py::arg("T"), py::arg("trials"), py::arg("seed"));
}
