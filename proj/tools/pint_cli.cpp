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

// Command-line front end: experiment sweeps, bound calculators and fixtures.

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <random>
#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pint/bounds.hpp"
#include "pint/coding.hpp"
#include "pint/engine.hpp"
#include "pint/fixed_point.hpp"
#include "pint/hpcc.hpp"
#include "pint/sim.hpp"
#include "pint/topology.hpp"

namespace {

using namespace pint;

uint64_t default_seed() {
  if (const char* env = std::getenv("PINT_SEED")) {
    try {
      return std::stoull(env, nullptr, 0);
    } catch (const std::exception&) {
      std::cerr << "warning: ignoring unparsable PINT_SEED='" << env << "'\n";
    }
  }
  return 1;
}

struct Common {
  uint64_t seed = default_seed();
  size_t trials = 1000;
  std::string out;
  int threads = 1;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--seed", c.seed, "Base seed; trial i uses seed ^ i (default: $PINT_SEED or 1)");
  app->add_option("--trials", c.trials, "Number of Monte Carlo trials")->check(CLI::PositiveNumber);
  app->add_option("--out", c.out, "Write CSV here instead of stdout");
  app->add_option("--threads", c.threads, "Worker threads for trials")->check(CLI::PositiveNumber);
}

// Output sink honoring --out.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw std::runtime_error("cannot write '" + path + "'");
    }
  }
  std::ostream& os() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

std::string num(double v) {
  std::ostringstream ss;
  ss << std::setprecision(6) << v;
  return ss.str();
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

// ---------------------------------------------------------------------------
// path

struct PathArgs {
  Common common;
  std::vector<int> ks;
  int d = 0;  // 0: 10 for topology files, else each row is tuned for d = k
  std::string preset = "maintext";
  std::string budget = "full,1,4,2x8";
  int universe = 0;
  std::string topology;
};

struct Variant {
  std::string name;
  bool hashed = false;
  int bits = 64;
  int instances = 1;
};

Variant parse_variant(const std::string& s) {
  if (s == "full") return {s, false, 64, 1};
  const auto x = s.find('x');
  try {
    if (x == std::string::npos) return {s, true, std::stoi(s), 1};
    return {s, true, std::stoi(s.substr(x + 1)), std::stoi(s.substr(0, x))};
  } catch (const std::exception&) {
    throw CLI::ValidationError("--budget", "unknown variant '" + s + "' (use full, <b> or <n>x<b>)");
  }
}

int cmd_path(const PathArgs& a) {
  std::vector<int> ks = a.ks;
  int universe = a.universe;
  if (!a.topology.empty()) {
    const Topology t = load_topology(a.topology);
    if (ks.empty())
      for (const auto& [name, p] : t.paths) ks.push_back(static_cast<int>(p.size()));
    if (universe == 0) universe = static_cast<int>(t.switches.size());
  }
  const int fixed_d = a.d ? a.d : (a.topology.empty() ? 0 : 10);
  if (ks.empty()) ks = {25};
  if (universe == 0) universe = 100;

  Output out(a.common.out);
  auto& os = out.os();
  os << "# schema: path/v1\n";
  const Preset preset = parse_preset(a.preset);
  os << "# preset=" << a.preset << " d=" << (fixed_d ? std::to_string(fixed_d) : "k") << " universe=" << universe << '\n';
  os << "record,k,variant,trial,seed,packets,mean,median,p99\n";
  std::vector<uint64_t> failed;
  for (int k : ks) {
    const LayerParams params = scheme_params(fixed_d ? fixed_d : k, preset);
    os << "# k=" << k << " tau=" << num(params.tau);
    for (double p : params.layer_probs) os << " p=" << num(p);
    os << '\n';
    for (const auto& vs : split_list(a.budget)) {
      const Variant v = parse_variant(vs);
      StaticTrialConfig cfg;
      cfg.k = k;
      cfg.universe = v.hashed ? universe : 0;
      cfg.scheme = v.hashed ? hashed_scheme(params, v.bits, v.instances) : collision_free_scheme(params);
      // Unfinished trials come back as -1 so workers share no state.
      const auto values = run_trials(a.common.trials, a.common.seed, [&](uint64_t s) {
        const StaticTrialResult r = run_static_trial(cfg, s);
        return r.completed ? static_cast<double>(r.packets) : -1.0;
      }, a.common.threads);
      std::vector<double> done;
      for (size_t i = 0; i < values.size(); ++i) {
        const uint64_t s = a.common.seed ^ i;
        if (values[i] < 0) failed.push_back(s);
        else done.push_back(values[i]);
        os << "trial," << k << ',' << v.name << ',' << i << ',' << s << ','
           << (values[i] < 0 ? std::string("incomplete") : std::to_string(static_cast<uint64_t>(values[i]))) << ",,,\n";
      }
      if (done.empty()) continue;
      const Summary s = summarize(done);
      os << "summary," << k << ',' << v.name << ",," << a.common.seed << ",," << num(s.mean) << ','
         << num(s.median) << ',' << num(s.p99) << '\n';
    }
  }
  if (!failed.empty()) {
    std::cerr << "error: " << failed.size() << " trial(s) hit the packet limit; replay seeds:";
    for (uint64_t s : failed) std::cerr << ' ' << s;
    std::cerr << '\n';
    return 2;
  }
  return 0;
}

// ---------------------------------------------------------------------------
// lnc

int cmd_lnc(const Common& c, int k) {
  Output out(c.out);
  auto& os = out.os();
  os << "# schema: lnc/v1\nrecord,k,trial,seed,packets,mean,median,p99\n";
  const auto values = run_trials(c.trials, c.seed, [&](uint64_t s) { return static_cast<double>(run_lnc_trial(k, s)); }, c.threads);
  for (size_t i = 0; i < values.size(); ++i)
    os << "trial," << k << ',' << i << ',' << (c.seed ^ i) << ',' << static_cast<uint64_t>(values[i]) << ",,,\n";
  const Summary s = summarize(values);
  os << "summary," << k << ",," << c.seed << ",," << num(s.mean) << ',' << num(s.median) << ',' << num(s.p99) << '\n';
  return 0;
}

// ---------------------------------------------------------------------------
// latency

struct LatencyArgs {
  Common common;
  int k = 5;
  uint64_t z = 0;
  double eps = 0.1;
  int sketch_capacity = 100;
  std::string dist = "uniform";
  double a = 1.0, b = 1000.0;
  int compress_bits = 0;
};

int cmd_latency(LatencyArgs a) {
  DynamicTrialConfig cfg;
  cfg.k = a.k;
  cfg.z = a.z ? a.z : static_cast<uint64_t>(40.0 * a.k / (a.eps * a.eps));
  cfg.sketch_k = a.sketch_capacity;
  if (a.dist == "constant") cfg.dist = {LatencyModel::kConstant, a.a, a.b};
  else if (a.dist == "uniform") cfg.dist = {LatencyModel::kUniform, a.a, a.b};
  else if (a.dist == "lognormal") cfg.dist = {LatencyModel::kLogNormal, a.a, a.b};
  else throw CLI::ValidationError("--dist", "expected constant, uniform or lognormal");
  if (a.compress_bits > 0) cfg.compress_bits = a.compress_bits;

  Output out(a.common.out);
  auto& os = out.os();
  os << "# schema: latency/v1\n# k=" << cfg.k << " z=" << cfg.z << " eps=" << num(a.eps)
     << " sketch_capacity=" << cfg.sketch_k << "\nrecord,k,trial,seed,hop,phi,rank_error,value_error\n";
  std::vector<std::vector<double>> errs(cfg.phis.size());
  std::vector<size_t> within(cfg.phis.size(), 0);
  for (size_t t = 0; t < a.common.trials; ++t) {
    const uint64_t s = a.common.seed ^ t;
    const DynamicTrialResult r = run_dynamic_trial(cfg, s);
    for (size_t j = 0; j < cfg.phis.size(); ++j) {
      double worst = 0.0;
      for (int h = 1; h <= cfg.k; ++h) {
        const double re = r.rank_error[h - 1][j];
        worst = std::max(worst, re);
        errs[j].push_back(re);
        os << "trial," << cfg.k << ',' << t << ',' << s << ',' << h << ',' << num(cfg.phis[j]) << ',' << num(re)
           << ',' << num(r.value_error[h - 1][j]) << '\n';
      }
      if (worst <= a.eps) ++within[j];
    }
  }
  for (size_t j = 0; j < cfg.phis.size(); ++j) {
    const Summary s = summarize(errs[j]);
    os << "summary," << cfg.k << ",," << a.common.seed << ",all," << num(cfg.phis[j]) << ',' << num(s.mean) << ','
       << "\n# phi=" << num(cfg.phis[j]) << ": trials with every hop within eps: " << within[j] << '/'
       << a.common.trials << '\n';
  }
  return 0;
}

// ---------------------------------------------------------------------------
// hpcc

int cmd_hpcc(const Common& c, size_t events, int q) {
  std::mt19937_64 rng(c.seed);
  const LogLookup lut(q);
  LinkState exact;
  SwitchLinkState sw = SwitchLinkState::from(exact);
  exact.B = sw.B_bytes_per_sec();
  exact.T = sw.T_seconds();
  Output out(c.out);
  auto& os = out.os();
  os << "# schema: hpcc/v1\n# q=" << q << " T_ns=" << sw.T_ns << " B_bytes_per_ns=" << num(exact.B * 1e-9)
     << "\nrecord,event,bytes,qlen,tau_ns,U_exact,U_switch,rel_error\n";
  double worst = 0.0, sum = 0.0;
  for (size_t i = 0; i < events; ++i) {
    SwitchDequeueEvent ev;
    ev.bytes = 64 + rng() % 1437;
    ev.qlen = rng() % 200000;
    ev.tau_ns = rng() % (sw.T_ns + 1);
    exact.U = util_update_exact(exact, to_exact(ev));
    sw.U_fix = util_update_switch(sw, ev, lut).U_fix;
    const double rel = exact.U > 0 ? std::abs(sw.U() - exact.U) / exact.U : 0.0;
    worst = std::max(worst, rel);
    sum += rel;
    os << "event," << i << ',' << ev.bytes << ',' << ev.qlen << ',' << ev.tau_ns << ',' << num(exact.U) << ','
       << num(sw.U()) << ',' << num(rel) << '\n';
  }
  os << "summary," << events << ",,,," << ",mean=" << num(sum / static_cast<double>(events)) << ",max=" << num(worst)
     << '\n';
  return 0;
}

// ---------------------------------------------------------------------------
// bounds

struct BoundsArgs {
  std::string formula;
  uint64_t V = 100, r = 232, n = 116;
  int k = 10, Z = 1, b = 16, T = 1, M = 64, B = 5, L = 3;
  double delta = 0.05, psi = 0.5, p = 0.5, K = 100;
};

int cmd_bounds(const BoundsArgs& a) {
  std::cout << std::setprecision(10);
  const std::string& f = a.formula;
  if (f == "required-z") {
    std::cout << "required_Z(V=" << a.V << ", k=" << a.k << ", delta=" << a.delta << ", b=" << a.b
              << ") = " << required_Z(a.V, a.k, a.delta, a.b) << '\n';
  } else if (f == "double-dixie") {
    const double N = double_dixie_N(a.k, a.Z, a.delta);
    std::cout << "double_dixie_N(k=" << a.k << ", Z=" << a.Z << ", delta=" << a.delta << ") = " << N
              << " (ceil " << std::ceil(N) << ")\n";
  } else if (f == "partial-coupon") {
    std::cout << "partial_coupon_bound(r=" << a.r << ", N=" << a.n << ", delta=" << a.delta
              << ") = " << partial_coupon_bound(a.r, a.n, a.delta) << "  E[A] = " << partial_coupon_expectation(a.r, a.n)
              << '\n';
  } else if (f == "partial-coverage") {
    std::cout << "partial_coverage_bound(K=" << a.K << ", psi=" << a.psi << ", delta=" << a.delta
              << ") = " << partial_coverage_bound(a.K, a.psi, a.delta) << '\n';
  } else if (f == "neg-binomial") {
    std::cout << "neg_binomial_N(k=" << a.k << ", p=" << a.p << ", delta=" << a.delta
              << ") = " << neg_binomial_N(a.k, a.p, a.delta) << '\n';
  } else if (f == "loop-fp") {
    std::cout << "loop_fp_bound(b=" << a.b << ", T=" << a.T << ", k=" << a.k << ") = "
              << static_cast<double>(loop_fp_bound(a.b, a.T, a.k)) << "  (collision sum "
              << static_cast<double>(loop_fp_collision_sum(a.T, a.k)) << ")\n";
  } else if (f == "coupon") {
    std::cout << "coupon_expectation(k=" << a.k << ") = " << coupon_expectation(static_cast<uint64_t>(a.k)) << '\n';
  } else if (f == "loop-detect") {
    std::cout << "loop_detect_probability(M=" << a.M << ", B=" << a.B << ", L=" << a.L << ", T=" << a.T
              << ") = " << loop_detect_probability(a.M, a.B, a.L, a.T) << '\n';
  } else {
    throw CLI::ValidationError("formula", "unknown formula '" + f + "'");
  }
  return 0;
}

// ---------------------------------------------------------------------------
// loop

int cmd_loop(const Common& c, int k, int b, int T) {
  const LoopParams lp{b, T};
  const uint64_t hits = run_loop_false_positive_trials(k, lp, c.trials, c.seed);
  const long double bound = loop_fp_bound(b, T, k);
  Output out(c.out);
  out.os() << "# schema: loop/v1\nk,b,T,trials,seed,hits,rate,bound\n"
           << k << ',' << b << ',' << T << ',' << c.trials << ',' << c.seed << ',' << hits << ','
           << num(static_cast<double>(hits) / static_cast<double>(c.trials)) << ',' << num(static_cast<double>(bound))
           << '\n';
  return 0;
}

// ---------------------------------------------------------------------------
// combined / plan

int cmd_plan(const std::string& queries) {
  const QueryFile f = queries.empty() ? combined_example() : load_query_file(queries);
  const ExecutionPlan plan = f.plan ? *f.plan : compile_plan(f.queries, f.global_budget);
  std::cout << plan_to_json(plan, f.queries) << '\n';
  return 0;
}

int cmd_combined(const Common& c, CombinedConfig cfg) {
  const QueryFile f = combined_example();
  Output out(c.out);
  auto& os = out.os();
  os << "# schema: combined/v1\n# plan:";
  for (const auto& e : f.plan->entries) {
    os << " {";
    for (size_t i = 0; i < e.queries.size(); ++i) os << (i ? "," : "") << f.queries[e.queries[i]].name;
    os << "}@" << num(e.probability);
  }
  os << "\nrecord,trial,seed,query,combined,standalone\n";
  double sum[3][2] = {};
  for (size_t t = 0; t < c.trials; ++t) {
    const uint64_t s = c.seed ^ t;
    const CombinedMetrics m = run_combined_trial(cfg, s);
    const uint64_t alone_seed = mix64(s ^ 0x616c6f6e65ULL);
    const CombinedMetrics p = run_standalone_trial(cfg, "path", cfg.packets, alone_seed);
    const CombinedMetrics l = run_standalone_trial(cfg, "latency", cfg.packets, alone_seed);
    const CombinedMetrics h = run_standalone_trial(cfg, "hpcc", cfg.packets, alone_seed);
    const double vals[3][2] = {{static_cast<double>(m.path_packets), static_cast<double>(p.path_packets)},
                               {m.latency_rank_error, l.latency_rank_error},
                               {m.hpcc_rel_error, h.hpcc_rel_error}};
    static const char* kNames[3] = {"path_packets", "latency_rank_error", "hpcc_rel_error"};
    for (int q = 0; q < 3; ++q) {
      os << "trial," << t << ',' << s << ',' << kNames[q] << ',' << num(vals[q][0]) << ',' << num(vals[q][1]) << '\n';
      sum[q][0] += vals[q][0];
      sum[q][1] += vals[q][1];
    }
  }
  static const char* kNames[3] = {"path_packets", "latency_rank_error", "hpcc_rel_error"};
  for (int q = 0; q < 3; ++q)
    os << "summary,," << c.seed << ',' << kNames[q] << ',' << num(sum[q][0] / c.trials) << ','
       << num(sum[q][1] / c.trials) << '\n';
  return 0;
}

// ---------------------------------------------------------------------------
// topology fixtures

int cmd_topology(const std::string& fixture, int k, int V, uint64_t seed, const std::string& out_path) {
  Topology t;
  if (fixture == "linear") t = linear_topology(k, V, seed);
  else if (fixture == "kentucky") t = kentucky_like_topology(seed);
  else throw CLI::ValidationError("--fixture", "expected linear or kentucky");
  Output out(out_path);
  write_topology(out.os(), t);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pint: probabilistic in-band telemetry experiments"};
  app.require_subcommand(1);

  PathArgs path_args;
  auto* path = app.add_subcommand("path", "Packets-to-decode for path tracing");
  add_common(path, path_args.common);
  path->add_option("--k", path_args.ks, "Path lengths (repeatable)");
  path->add_option("--d", path_args.d, "Typical path length the scheme is tuned for (default: 10 with --topology, else k)");
  path->add_option("--preset", path_args.preset, "maintext, appendix or revisedtau");
  path->add_option("--budget", path_args.budget, "Comma list of variants: full, <b>, <n>x<b>");
  path->add_option("--universe", path_args.universe, "Candidate switch ids |V| for hashed variants");
  path->add_option("--topology", path_args.topology, "Topology file: its paths set k, its switches set |V|");

  Common lnc_common;
  int lnc_k = 16;
  auto* lnc = app.add_subcommand("lnc", "Packets to full rank for GF(2) network coding");
  add_common(lnc, lnc_common);
  lnc->add_option("--k", lnc_k, "Path length")->check(CLI::Range(1, 256));

  LatencyArgs lat_args;
  auto* latency = app.add_subcommand("latency", "Per-hop latency quantile errors");
  add_common(latency, lat_args.common);
  latency->add_option("--k", lat_args.k, "Path length");
  latency->add_option("--z", lat_args.z, "Packets per trial (default 40 k / eps^2)");
  latency->add_option("--eps", lat_args.eps, "Target rank error");
  latency->add_option("--sketch-capacity", lat_args.sketch_capacity, "Quantile sketch size per hop");
  latency->add_option("--dist", lat_args.dist, "constant, uniform or lognormal");
  latency->add_option("--dist-a", lat_args.a, "Constant value, uniform low end, or lognormal mu");
  latency->add_option("--dist-b", lat_args.b, "Uniform high end or lognormal sigma");
  latency->add_option("--compress-bits", lat_args.compress_bits, "Carry values as indices of this width");

  Common hpcc_common;
  size_t hpcc_events = 1000;
  int hpcc_q = 8;
  auto* hpcc = app.add_subcommand("hpcc", "Switch utilization EWMA against the exact update");
  add_common(hpcc, hpcc_common);
  hpcc->add_option("--events", hpcc_events, "Dequeue events");
  hpcc->add_option("--q", hpcc_q, "Lookup table key width")->check(CLI::Range(1, 20));

  BoundsArgs bounds_args;
  auto* bounds = app.add_subcommand("bounds", "Evaluate an analytic bound");
  bounds->add_option("formula", bounds_args.formula,
                     "required-z, double-dixie, partial-coupon, partial-coverage, neg-binomial, loop-fp, coupon, loop-detect")
      ->required();
  bounds->add_option("--V", bounds_args.V, "Candidate set size");
  bounds->add_option("--k", bounds_args.k, "Hops (or successes for neg-binomial)");
  bounds->add_option("--z", bounds_args.Z, "Copies required per coupon");
  bounds->add_option("--delta", bounds_args.delta, "Failure probability");
  bounds->add_option("--b", bounds_args.b, "Digest bits");
  bounds->add_option("--r", bounds_args.r, "Slots");
  bounds->add_option("--n", bounds_args.n, "Distinct slots to see");
  bounds->add_option("--K", bounds_args.K, "Coupons");
  bounds->add_option("--psi", bounds_args.psi, "Residual fraction");
  bounds->add_option("--p", bounds_args.p, "Success probability");
  bounds->add_option("--T", bounds_args.T, "Loop threshold");
  bounds->add_option("--M", bounds_args.M, "Initial TTL");
  bounds->add_option("--B", bounds_args.B, "Hops before the loop");
  bounds->add_option("--L", bounds_args.L, "Loop length");

  Common loop_common;
  loop_common.trials = 1000000;
  int loop_k = 32, loop_b = 15, loop_T = 1;
  auto* loop = app.add_subcommand("loop", "False loop reports on loop-free paths");
  add_common(loop, loop_common);
  loop->add_option("--k", loop_k, "Path length");
  loop->add_option("--b", loop_b, "Hash bits")->check(CLI::Range(1, 64));
  loop->add_option("--T", loop_T, "Matches tolerated before reporting");

  Common comb_common;
  comb_common.trials = 100;
  CombinedConfig comb_cfg;
  auto* combined = app.add_subcommand("combined", "Three concurrent queries against standalone runs");
  add_common(combined, comb_common);
  combined->add_option("--k", comb_cfg.k, "Path length");
  combined->add_option("--universe", comb_cfg.universe, "Switch ids |V|");
  combined->add_option("--packets", comb_cfg.packets, "Packets per trial");

  std::string plan_queries;
  auto* plan = app.add_subcommand("plan", "Compile (or validate) an execution plan");
  plan->add_option("--queries", plan_queries, "Query file (default: the shipped combined example)");

  std::string fixture = "linear", topo_out;
  int topo_k = 5, topo_V = 100;
  uint64_t topo_seed = 1;
  auto* topo = app.add_subcommand("topology", "Write a topology fixture");
  topo->add_option("--fixture", fixture, "linear or kentucky");
  topo->add_option("--k", topo_k, "Path length (linear)");
  topo->add_option("--V", topo_V, "Switch count (linear)");
  topo->add_option("--seed", topo_seed, "Fixture seed");
  topo->add_option("--out", topo_out, "Output file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*path) return cmd_path(path_args);
    if (*lnc) return cmd_lnc(lnc_common, lnc_k);
    if (*latency) return cmd_latency(lat_args);
    if (*hpcc) return cmd_hpcc(hpcc_common, hpcc_events, hpcc_q);
    if (*bounds) return cmd_bounds(bounds_args);
    if (*loop) return cmd_loop(loop_common, loop_k, loop_b, loop_T);
    if (*combined) return cmd_combined(comb_common, comb_cfg);
    if (*plan) return cmd_plan(plan_queries);
    if (*topo) return cmd_topology(fixture, topo_k, topo_V, topo_seed, topo_out);
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const TrialFailure& e) {
    std::cerr << "error: " << e.what() << " (replay seed " << e.seed() << ")\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
