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
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pint/hashing.hpp"
#include "pint/sketch.hpp"

namespace pint {

struct SampledValue {
  uint64_t packet_id = 0;
  int hop = 1;
  uint64_t value = 0;
};

/// Switch step: hop i overwrites the digest iff g(p, i) <= 1/i.
uint64_t reservoir_encode(uint64_t digest, uint64_t packet_id, int hop, uint64_t value,
                          HashSeed seed);

/// The hop whose value a packet carries: max{i <= k : g(p, i) <= 1/i}.
int attribute_hop(uint64_t packet_id, int k, HashSeed seed);

/// Sizing of the per-hop summaries for one flow.
struct RecorderConfig {
  int sketch_k = 100;
  double hh_epsilon = 0.05;  // heavy-hitter error budget (summary gets half)
  uint64_t seed = 0;
};

/// Per-(flow, hop) summaries fed by attributed digests. The space is split
/// evenly: each hop owns one quantile sketch and one heavy-hitter summary.
class FlowHopRecorder {
 public:
  FlowHopRecorder(int k, RecorderConfig cfg = {});

  /// Real value for the quantile sketch and its integer code for heavy hitters.
  void add(int hop, double value, uint64_t code);
  void add(uint64_t packet_id, uint64_t digest, HashSeed seed, double decoded_value);

  int path_length() const { return k_; }
  uint64_t samples(int hop) const;

  /// nullopt means "insufficient data": the hop has not been sampled yet.
  std::optional<double> quantile(int hop, double phi) const;
  std::vector<uint64_t> heavy_hitters(int hop, double theta, double eps) const;

  const KllSketch& sketch(int hop) const { return sketches_.at(hop - 1); }

 private:
  int k_;
  RecorderConfig cfg_;
  std::vector<KllSketch> sketches_;
  std::vector<SpaceSaving> hitters_;
};

/// Recording store for dynamic per-flow queries, keyed by flow.
class DynamicStore {
 public:
  explicit DynamicStore(RecorderConfig cfg = {});

  FlowHopRecorder& flow(const std::string& key, int k);
  const FlowHopRecorder* find(const std::string& key) const;
  size_t flows() const { return flows_.size(); }

  /// CSV: flow,hop,n,q0.25,q0.5,q0.75,q0.99 (empty cells for unsampled hops).
  void export_csv(std::ostream& out) const;

 private:
  RecorderConfig cfg_;
  std::map<std::string, FlowHopRecorder> flows_;
};

}  // namespace pint
