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

#include "pint/sim.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <random>
#include <thread>
#include <unordered_map>

#include "pint/approx.hpp"
#include "pint/dynamic_agg.hpp"
#include "pint/engine.hpp"
#include "pint/hpcc.hpp"
#include "pint/lnc.hpp"

namespace pint {

Summary summarize(std::vector<double> v) {
  Summary s;
  s.n = v.size();
  if (v.empty()) return s;
  std::sort(v.begin(), v.end());
  s.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  auto rank = [&](double p) {
    const auto r = static_cast<size_t>(std::ceil(p * static_cast<double>(v.size())));
    return v[std::clamp<size_t>(r, 1, v.size()) - 1];
  };
  s.median = rank(0.5);
  s.p99 = rank(0.99);
  s.min = v.front();
  s.max = v.back();
  return s;
}

std::vector<double> run_trials(size_t n, uint64_t base_seed, const std::function<double(uint64_t)>& trial,
                               int threads) {
  if (n == 0) throw std::invalid_argument("run_trials: need at least one trial");
  std::vector<double> out(n);
  if (threads <= 1) {
    for (size_t i = 0; i < n; ++i) out[i] = trial(base_seed ^ i);
    return out;
  }
  std::atomic<size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (size_t i = next++; i < n; i = next++) {
        try {
          out[i] = trial(base_seed ^ i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
  return out;
}

MonteCarloResult monte_carlo(size_t n, uint64_t base_seed, const std::function<double(uint64_t)>& trial,
                             int threads) {
  MonteCarloResult r;
  r.values = run_trials(n, base_seed, trial, threads);
  r.summary = summarize(r.values);
  return r;
}

// ---------------------------------------------------------------------------

namespace {

HashSeed trial_hash_seed(uint64_t seed, uint64_t salt) { return HashSeed{mix64(seed ^ mix64(salt)), 0}; }

// k distinct ids drawn from 1..V.
std::vector<uint64_t> draw_path(int k, int V, std::mt19937_64& rng) {
  std::vector<uint64_t> pool(static_cast<size_t>(V));
  std::iota(pool.begin(), pool.end(), uint64_t{1});
  for (int i = 0; i < k; ++i) {
    std::uniform_int_distribution<size_t> pick(static_cast<size_t>(i), pool.size() - 1);
    std::swap(pool[static_cast<size_t>(i)], pool[pick(rng)]);
  }
  pool.resize(static_cast<size_t>(k));
  return pool;
}

}  // namespace

StaticScheme collision_free_scheme(const LayerParams& params) {
  StaticScheme s;
  s.params = params;
  s.mode = BlockMode::kRaw;
  s.digest_bits = 64;
  s.value_bits = 64;
  return s;
}

StaticScheme hashed_scheme(const LayerParams& params, int bits, int instances) {
  StaticScheme s;
  s.params = params;
  s.mode = BlockMode::kHashed;
  s.digest_bits = bits;
  s.instances = instances;
  return s;
}

StaticTrialResult run_static_trial(const StaticTrialConfig& cfg, uint64_t seed) {
  const StaticScheme& sch = cfg.scheme;
  if (cfg.k < 1) throw std::invalid_argument("run_static_trial: k must be >= 1");
  if ((cfg.universe > 0) != (sch.mode == BlockMode::kHashed))
    throw std::invalid_argument("run_static_trial: hashed mode goes with a candidate universe");
  std::mt19937_64 rng(seed);
  const HashSeed hs = trial_hash_seed(seed, 0x70617468);
  std::vector<uint64_t> path, candidates;
  if (cfg.universe > 0) {
    if (cfg.universe < cfg.k) throw std::invalid_argument("run_static_trial: |V| < k");
    path = draw_path(cfg.k, cfg.universe, rng);
    candidates.resize(static_cast<size_t>(cfg.universe));
    std::iota(candidates.begin(), candidates.end(), uint64_t{1});
  } else {
    for (int i = 0; i < cfg.k; ++i) path.push_back(rng());
  }
  StaticDecoder dec(cfg.k, sch, hs, std::move(candidates));
  StaticTrialResult r;
  while (r.packets < cfg.max_packets && !dec.complete()) {
    const uint64_t pid = rng();
    ++r.packets;
    for (int j = 0; j < sch.instances; ++j) {
      const StaticDigest d = encode_static_path(pid, path, sch, hs, static_cast<uint32_t>(j));
      dec.add(CodedObservation{pid, d.bits, static_cast<uint32_t>(j)});
    }
  }
  r.completed = dec.complete();
  r.contradiction = dec.contradiction();
  if (auto vals = dec.values()) r.correct = *vals == path;
  return r;
}

uint64_t run_lnc_trial(int k, uint64_t seed, uint64_t max_packets) {
  std::mt19937_64 rng(seed);
  const HashSeed hs = trial_hash_seed(seed, 0x6c6e63);
  std::vector<uint64_t> blocks(static_cast<size_t>(k));
  for (auto& b : blocks) b = rng();
  LncDecoder dec(k);
  uint64_t packets = 0;
  while (!dec.complete()) {
    if (packets == max_packets) throw TrialFailure("lnc trial did not reach full rank", seed);
    const uint64_t pid = rng();
    ++packets;
    dec.add(pid, lnc_encode(pid, blocks, hs), hs);
  }
  return packets;
}

// ---------------------------------------------------------------------------

namespace {

double draw_latency(const LatencyDist& d, std::mt19937_64& rng) {
  switch (d.model) {
    case LatencyModel::kConstant: return d.a;
    case LatencyModel::kUniform: return std::uniform_real_distribution<double>(d.a, d.b)(rng);
    case LatencyModel::kLogNormal: return std::lognormal_distribution<double>(d.a, d.b)(rng);
  }
  return d.a;
}

double exact_quantile(const std::vector<double>& sorted, double phi) {
  const auto idx = std::min(sorted.size() - 1, static_cast<size_t>(std::floor(phi * static_cast<double>(sorted.size()))));
  return sorted[idx];
}

}  // namespace

double rank_error(const std::vector<double>& sorted, double v, double phi) {
  const double n = static_cast<double>(sorted.size());
  const double lt = static_cast<double>(std::lower_bound(sorted.begin(), sorted.end(), v) - sorted.begin()) / n;
  const double le = static_cast<double>(std::upper_bound(sorted.begin(), sorted.end(), v) - sorted.begin()) / n;
  if (phi < lt) return lt - phi;
  if (phi > le) return phi - le;
  return 0.0;
}

DynamicTrialResult run_dynamic_trial(const DynamicTrialConfig& cfg, uint64_t seed) {
  if (cfg.z < static_cast<uint64_t>(cfg.k)) throw std::invalid_argument("run_dynamic_trial: need z >= k");
  std::mt19937_64 rng(seed);
  const HashSeed hs = trial_hash_seed(seed, 0x6c6174);
  std::optional<MultCodec> codec;
  if (cfg.compress_bits) {
    MultCodec c;
    c.eps = cfg.compress_eps;
    c.bits = *cfg.compress_bits;
    c.lo = 1.0;
    c.hi = 0x1p16;
    c.validate();
    codec = c;
  }
  RecorderConfig rc;
  rc.sketch_k = cfg.sketch_k;
  rc.seed = seed;
  FlowHopRecorder rec(cfg.k, rc);
  std::vector<std::vector<double>> truth(static_cast<size_t>(cfg.k));
  for (uint64_t j = 0; j < cfg.z; ++j) {
    const uint64_t pid = rng();
    uint64_t digest = 0;
    for (int h = 1; h <= cfg.k; ++h) {
      // Hops differ in scale so a misattributed sample would show up as error.
      const double v = draw_latency(cfg.dist, rng) * (1.0 + 0.25 * (h - 1));
      truth[static_cast<size_t>(h - 1)].push_back(v);
      const uint64_t code = codec ? codec->encode_randomized(v, absorb(pid, static_cast<uint64_t>(h)), hs).index
                                  : std::bit_cast<uint64_t>(v);
      digest = reservoir_encode(digest, pid, h, code, hs);
    }
    const double decoded = codec ? codec->decode(digest) : std::bit_cast<double>(digest);
    rec.add(pid, digest, hs, decoded);
  }
  DynamicTrialResult r;
  for (int h = 1; h <= cfg.k; ++h) {
    auto& s = truth[static_cast<size_t>(h - 1)];
    std::sort(s.begin(), s.end());
    std::vector<double> re, ve;
    for (double phi : cfg.phis) {
      const auto est = rec.quantile(h, phi);
      if (!est) {
        re.push_back(1.0);
        ve.push_back(1.0);
        continue;
      }
      re.push_back(rank_error(s, *est, phi));
      const double exact = exact_quantile(s, phi);
      ve.push_back(exact == 0.0 ? std::abs(*est) : std::abs(*est - exact) / exact);
      r.max_rank_error = std::max(r.max_rank_error, re.back());
    }
    r.rank_error.push_back(std::move(re));
    r.value_error.push_back(std::move(ve));
  }
  return r;
}

HeavyHitterTrialResult run_heavy_hitter_trial(int k, uint64_t z, double theta, double eps, uint64_t seed) {
  std::mt19937_64 rng(seed);
  const HashSeed hs = trial_hash_seed(seed, 0x6868);
  RecorderConfig rc;
  rc.hh_epsilon = eps;
  rc.seed = seed;
  FlowHopRecorder rec(k, rc);
  const double light = std::max(0.0, theta - eps - 0.03);
  std::vector<std::unordered_map<uint64_t, uint64_t>> counts(static_cast<size_t>(k));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (uint64_t j = 0; j < z; ++j) {
    const uint64_t pid = rng();
    uint64_t digest = 0;
    for (int h = 1; h <= k; ++h) {
      const double u = unit(rng);
      const uint64_t base = static_cast<uint64_t>(h) << 40;
      uint64_t v;
      if (u < 0.30) v = base + 1;
      else if (u < 0.30 + light) v = base + 2;
      else v = base + 1000 + rng() % 1000000;
      ++counts[static_cast<size_t>(h - 1)][v];
      digest = reservoir_encode(digest, pid, h, v, hs);
    }
    const int hop = attribute_hop(pid, k, hs);
    rec.add(hop, static_cast<double>(digest), digest);
  }
  HeavyHitterTrialResult r;
  for (int h = 1; h <= k; ++h) {
    const auto reported = rec.heavy_hitters(h, theta, eps);
    for (const auto& [v, c] : counts[static_cast<size_t>(h - 1)]) {
      const double f = static_cast<double>(c) / static_cast<double>(z);
      const bool rep = std::find(reported.begin(), reported.end(), v) != reported.end();
      if (f >= theta && !rep) r.all_heavy_reported = false;
      if (f < theta - eps && rep) r.no_light_reported = false;
    }
  }
  return r;
}

// ---------------------------------------------------------------------------

int LoopParams::counter_bits() const { return T == 0 ? 0 : static_cast<int>(std::bit_width(static_cast<unsigned>(T))); }

LoopVerdict loop_process(LoopPacket& p, uint64_t switch_id, int hop, const LoopParams& params, HashSeed seed) {
  const uint64_t h = value_hash(switch_id, p.id, params.b, seed);
  if (hop > 1 && p.digest == h) {
    if (p.c == params.T) return LoopVerdict::kLoop;
    ++p.c;
  }
  if (p.c == 0 && hop_hash(p.id, hop, seed).at_most(1.0 / hop)) p.digest = h;
  return LoopVerdict::kContinue;
}

uint64_t run_loop_false_positive_trials(int k, const LoopParams& params, uint64_t trials, uint64_t seed) {
  const HashSeed hs = trial_hash_seed(seed, 0x6c6f6f70);
  uint64_t hits = 0;
  for (uint64_t t = 0; t < trials; ++t) {
    LoopPacket p;
    p.id = mix64(seed + 0x9e3779b97f4a7c15ULL * (t + 1));
    for (int i = 1; i <= k; ++i) {
      if (loop_process(p, static_cast<uint64_t>(i), i, params, hs) == LoopVerdict::kLoop) {
        ++hits;
        break;
      }
    }
  }
  return hits;
}

LoopDetectionResult run_loop_detection_trial(int B, int L, int M_ttl, const LoopParams& params, uint64_t seed) {
  if (L < 1) throw std::invalid_argument("run_loop_detection_trial: loop length must be >= 1");
  const HashSeed hs = trial_hash_seed(seed, 0x6c6f6f70);
  LoopPacket p;
  p.id = mix64(seed ^ 0x5a5a5a5aULL);
  LoopDetectionResult r;
  for (int i = 1; i <= M_ttl; ++i) {
    const uint64_t sw = i <= B ? static_cast<uint64_t>(i) : static_cast<uint64_t>(1000 + (i - B - 1) % L);
    const int before = p.c;
    if (loop_process(p, sw, i, params, hs) == LoopVerdict::kLoop) {
      r.detected = true;
      r.detect_hop = i;
      if (r.first_match_hop == 0) r.first_match_hop = i;
      return r;
    }
    if (before == 0 && p.c > 0) r.first_match_hop = i;
  }
  return r;
}

// ---------------------------------------------------------------------------

namespace {

// Three per-link processes: an HPCC utilization EWMA per hop computed on the
// switch path, per-hop lognormal latencies, and the switch ids of the path.
CombinedMetrics run_pipeline(const CombinedConfig& cfg, const QueryFile& qf, uint64_t packets, uint64_t seed) {
  std::mt19937_64 rng(seed);
  Pipeline pipe(qf.queries, *qf.plan, HashSeed{mix64(seed ^ 0x706970ULL), 0});
  const std::vector<uint64_t> path = draw_path(cfg.k, cfg.universe, rng);
  const LogLookup lut(8);
  std::vector<SwitchLinkState> links(static_cast<size_t>(cfg.k));
  std::vector<double> load(static_cast<size_t>(cfg.k));
  for (auto& l : load) l = std::uniform_real_distribution<double>(0.3, 1.2)(rng);

  RecordingStore store;
  std::vector<std::vector<double>> lat_truth(static_cast<size_t>(cfg.k));
  std::vector<double> util_max;
  std::vector<uint64_t> order;
  for (uint64_t j = 0; j < packets; ++j) {
    const uint64_t pid = rng();
    Packet pkt = pipe.source(pid, "flow0", {0xab, 0xcd});
    double umax = 0.0;
    for (int h = 1; h <= cfg.k; ++h) {
      auto& link = links[static_cast<size_t>(h - 1)];
      SwitchDequeueEvent ev;
      ev.bytes = 1000 + rng() % 500;
      const double gap = static_cast<double>(ev.bytes) / 12.5 / load[static_cast<size_t>(h - 1)];
      ev.tau_ns = static_cast<uint64_t>(std::max(1.0, gap * std::uniform_real_distribution<double>(0.5, 1.5)(rng)));
      ev.qlen = static_cast<uint64_t>(20000.0 * load[static_cast<size_t>(h - 1)] * std::uniform_real_distribution<double>(0.0, 1.0)(rng));
      link.U_fix = util_update_switch(link, ev, lut).U_fix;
      const double u = std::clamp(link.U(), 0x1p-10, 0x1p6);
      umax = std::max(umax, u);
      const double lat = std::clamp(std::lognormal_distribution<double>(std::log(500.0) + 0.2 * h, 0.5)(rng), 1.0, 65536.0);
      lat_truth[static_cast<size_t>(h - 1)].push_back(lat);
      pipe.switch_process(pkt, SwitchContext{path[static_cast<size_t>(h - 1)], lat, u, 0.0});
    }
    util_max.push_back(umax);
    store.record(pipe.sink_extract(pkt));
  }

  CombinedMetrics m;
  const auto& recs = store.flow("flow0");
  for (const auto& q : pipe.queries()) {
    const HashSeed qs = pipe.query_seed(q.id);
    if (q.name == "path") {
      std::vector<uint64_t> cands(static_cast<size_t>(cfg.universe));
      std::iota(cands.begin(), cands.end(), uint64_t{1});
      StaticDecoder dec(cfg.k, q.static_scheme(), qs, cands);
      for (const auto& r : recs) {
        if (!r.slices.count(q.id)) continue;
        ++m.path_samples;
        for (const auto& o : static_observations({r}, q)) dec.add(o);
        if (dec.complete() && m.path_packets == 0) {
          m.path_packets = m.path_samples;
          m.path_correct = dec.values() == path;
        }
      }
    } else if (q.name == "latency") {
      const MultCodec codec = q.codec();
      FlowHopRecorder rec(cfg.k);
      for (const auto& r : recs) {
        auto it = r.slices.find(q.id);
        if (it == r.slices.end()) continue;
        ++m.latency_samples;
        rec.add(r.packet_id, it->second, qs, codec.decode(it->second));
      }
      double sum = 0.0;
      int n = 0;
      for (int h = 1; h <= cfg.k; ++h) {
        auto& s = lat_truth[static_cast<size_t>(h - 1)];
        std::sort(s.begin(), s.end());
        for (double phi : cfg.phis) {
          const auto est = rec.quantile(h, phi);
          sum += est ? rank_error(s, *est, phi) : 1.0;
          ++n;
        }
      }
      m.latency_rank_error = n ? sum / n : 0.0;
    } else if (q.name == "hpcc") {
      const MultCodec codec = q.codec();
      double sum = 0.0;
      for (size_t j = 0; j < recs.size(); ++j) {
        auto it = recs[j].slices.find(q.id);
        if (it == recs[j].slices.end()) continue;
        ++m.hpcc_samples;
        sum += std::abs(codec.decode(it->second) - util_max[j]) / util_max[j];
      }
      m.hpcc_rel_error = m.hpcc_samples ? sum / static_cast<double>(m.hpcc_samples) : 0.0;
    }
  }
  return m;
}

QueryFile combined_for(const CombinedConfig& cfg) {
  QueryFile f = combined_example();
  for (auto& q : f.queries)
    if (q.agg == AggKind::kStaticPerFlow) q.d = cfg.k;
  return f;
}

}  // namespace

CombinedMetrics run_combined_trial(const CombinedConfig& cfg, uint64_t seed) {
  return run_pipeline(cfg, combined_for(cfg), cfg.packets, seed);
}

CombinedMetrics run_standalone_trial(const CombinedConfig& cfg, const std::string& query, uint64_t packets,
                                     uint64_t seed) {
  QueryFile f = combined_for(cfg);
  QueryFile solo;
  solo.global_budget = f.global_budget;
  for (auto q : f.queries) {
    if (q.name != query) continue;
    q.frequency = 1.0;
    solo.queries.push_back(q);
  }
  if (solo.queries.empty()) throw std::invalid_argument("run_standalone_trial: unknown query '" + query + "'");
  solo.plan = ExecutionPlan{solo.global_budget, {PlanEntry{{solo.queries.front().id}, 1.0}}};
  return run_pipeline(cfg, solo, packets, seed);
}

}  // namespace pint
