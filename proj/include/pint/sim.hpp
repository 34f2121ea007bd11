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

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pint/coding.hpp"
#include "pint/hashing.hpp"

namespace pint {

// ---------------------------------------------------------------------------
// Monte Carlo harness
// ---------------------------------------------------------------------------

struct Summary {
  size_t n = 0;
  double mean = 0, median = 0, p99 = 0, min = 0, max = 0;
};

/// Mean plus nearest-rank median and 99th percentile.
Summary summarize(std::vector<double> values);

/// Thrown by a trial that cannot finish; carries the seed to replay it.
class TrialFailure : public std::runtime_error {
 public:
  TrialFailure(const std::string& what, uint64_t seed) : std::runtime_error(what), seed_(seed) {}
  uint64_t seed() const { return seed_; }

 private:
  uint64_t seed_;
};

/// Trial i runs with seed base_seed ^ i. Results are in trial order for any
/// thread count.
std::vector<double> run_trials(size_t n, uint64_t base_seed, const std::function<double(uint64_t)>& trial,
                               int threads = 1);

struct MonteCarloResult {
  std::vector<double> values;
  Summary summary;
};
MonteCarloResult monte_carlo(size_t n, uint64_t base_seed, const std::function<double(uint64_t)>& trial,
                             int threads = 1);

// ---------------------------------------------------------------------------
// Static per-flow (path tracing) trials
// ---------------------------------------------------------------------------

struct StaticTrialConfig {
  int k = 25;
  /// Candidate universe size |V|. 0 selects collision-free operation: random
  /// 64-bit blocks carried verbatim.
  int universe = 0;
  StaticScheme scheme;
  uint64_t max_packets = 1000000;
};

struct StaticTrialResult {
  uint64_t packets = 0;
  bool completed = false;
  bool contradiction = false;
  bool correct = false;  // decoded values equal the true path
};

StaticTrialResult run_static_trial(const StaticTrialConfig& cfg, uint64_t seed);

/// Scheme for collision-free runs: 64-bit raw blocks, one fragment.
StaticScheme collision_free_scheme(const LayerParams& params);
/// Scheme for hashed runs with `instances` digests of `bits` each.
StaticScheme hashed_scheme(const LayerParams& params, int bits, int instances);

/// Packets until random GF(2) combinations of k blocks reach full rank.
uint64_t run_lnc_trial(int k, uint64_t seed, uint64_t max_packets = 1000000);

// ---------------------------------------------------------------------------
// Dynamic per-flow (latency quantile) trials
// ---------------------------------------------------------------------------

enum class LatencyModel { kConstant, kUniform, kLogNormal };

struct LatencyDist {
  LatencyModel model = LatencyModel::kUniform;
  double a = 1.0;  // constant value, uniform low end, or lognormal mu
  double b = 1000.0;  // uniform high end or lognormal sigma
};

struct DynamicTrialConfig {
  int k = 5;
  uint64_t z = 4000;
  LatencyDist dist;
  int sketch_k = 100;
  std::vector<double> phis = {0.5, 0.99};
  /// When set, values travel as multiplicative indices of this width.
  std::optional<int> compress_bits;
  double compress_eps = 0.025;
};

struct DynamicTrialResult {
  // rank_error[h][j]: distance between phis[j] and the rank interval of the
  // hop-h estimate in the hop's exact value multiset.
  std::vector<std::vector<double>> rank_error;
  // Relative error of the estimate against the exact phi-quantile value.
  std::vector<std::vector<double>> value_error;
  double max_rank_error = 0.0;
};

DynamicTrialResult run_dynamic_trial(const DynamicTrialConfig& cfg, uint64_t seed);

/// Rank interval distance: 0 when phi lies in [#(< v), #(<= v)] / n.
double rank_error(const std::vector<double>& sorted_values, double v, double phi);

struct HeavyHitterTrialResult {
  bool all_heavy_reported = true;  // every value with frequency >= theta
  bool no_light_reported = true;   // no value with frequency < theta - eps
};

/// Each hop sees a stream with one value at 30% frequency, one just under
/// theta - eps, and a long tail of rare values.
HeavyHitterTrialResult run_heavy_hitter_trial(int k, uint64_t z, double theta, double eps, uint64_t seed);

// ---------------------------------------------------------------------------
// Loop detection
// ---------------------------------------------------------------------------

struct LoopParams {
  int b = 15;  // hash bits
  int T = 1;   // matches tolerated before reporting
  int counter_bits() const;
};

struct LoopPacket {
  uint64_t id = 0;
  uint64_t digest = 0;
  int c = 0;
};

enum class LoopVerdict { kContinue, kLoop };

/// One switch step of the loop-detecting variant. The first hop only writes:
/// there is no earlier switch whose hash the digest could hold.
LoopVerdict loop_process(LoopPacket& packet, uint64_t switch_id, int hop, const LoopParams& params,
                         HashSeed seed);

/// False loop reports over `trials` packets crossing a loop-free k-hop path.
uint64_t run_loop_false_positive_trials(int k, const LoopParams& params, uint64_t trials, uint64_t seed);

struct LoopDetectionResult {
  bool detected = false;
  int detect_hop = 0;       // hop that reported LOOP
  int first_match_hop = 0;  // hop where c first became non-zero
};

/// B loop-free hops followed by a cycle of L switches repeated until the
/// TTL of M hops runs out.
LoopDetectionResult run_loop_detection_trial(int B, int L, int M_ttl, const LoopParams& params, uint64_t seed);

// ---------------------------------------------------------------------------
// Combined plan
// ---------------------------------------------------------------------------

struct CombinedConfig {
  int k = 5;
  int universe = 100;
  uint64_t packets = 2000;
  std::vector<double> phis = {0.5, 0.99};
};

/// Accuracy of each query after a run. Path: packets until the path
/// decoded (0 if never). Latency: mean rank error over hops and phis.
/// HPCC: mean relative error of the decoded bottleneck utilization.
struct CombinedMetrics {
  uint64_t path_packets = 0;
  bool path_correct = false;
  double latency_rank_error = 0.0;
  double hpcc_rel_error = 0.0;
  uint64_t path_samples = 0, latency_samples = 0, hpcc_samples = 0;
};

/// All three queries through the shipped 16-bit plan.
CombinedMetrics run_combined_trial(const CombinedConfig& cfg, uint64_t seed);

/// One query alone (name "path", "latency" or "hpcc"), fed `packets` packets.
CombinedMetrics run_standalone_trial(const CombinedConfig& cfg, const std::string& query, uint64_t packets,
                                     uint64_t seed);

}  // namespace pint
