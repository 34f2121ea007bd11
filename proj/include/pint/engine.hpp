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
#include <stdexcept>
#include <string>
#include <vector>

#include "pint/approx.hpp"
#include "pint/coding.hpp"
#include "pint/hashing.hpp"

namespace pint {

enum class ValueKind { kSwitchId, kHopLatency, kLinkUtilization, kTimestamp };
enum class AggKind { kPerPacket, kStaticPerFlow, kDynamicPerFlow };

std::string to_string(ValueKind v);
std::string to_string(AggKind a);
ValueKind parse_value_kind(const std::string& s);
AggKind parse_agg_kind(const std::string& s);

/// One telemetry query: the value it collects, how it aggregates, its bit
/// budget and how often it must run. The remaining fields tune its encoder.
struct QuerySpec {
  int id = 0;
  std::string name;
  ValueKind value = ValueKind::kSwitchId;
  AggKind agg = AggKind::kStaticPerFlow;
  int bit_budget = 8;
  std::optional<uint64_t> space_budget;  // bytes per flow at the recording side
  std::vector<std::string> flow_def = {"src_ip", "dst_ip", "src_port", "dst_port", "proto"};
  double frequency = 1.0;

  // Static per-flow encoder.
  int instances = 1;
  int d = 10;
  Preset preset = Preset::kMainText;
  BlockMode mode = BlockMode::kHashed;

  // Value compression for per-packet and dynamic queries.
  double epsilon = 0.025;
  std::optional<double> range_lo;
  std::optional<double> range_hi;

  MultCodec codec() const;
  StaticScheme static_scheme() const;
  void validate(int global_budget) const;
};

struct PlanEntry {
  std::vector<int> queries;  // query ids, ascending
  double probability = 0.0;
};

/// Probability distribution over query subsets, each fitting the budget.
struct ExecutionPlan {
  int global_budget = 16;
  std::vector<PlanEntry> entries;

  /// Sum of probabilities of the entries that run query `id`.
  double frequency_of(int id) const;
};

class PlanError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Greedy packing. Queries are taken by decreasing frequency and laid onto
/// the unit interval from the left wherever their bits still fit; adjacent
/// stretches running the same subset are merged into one entry.
ExecutionPlan compile_plan(const std::vector<QuerySpec>& queries, int global_budget);

/// Throws PlanError naming the offending entry or query.
void validate_plan(const ExecutionPlan& plan, const std::vector<QuerySpec>& queries);

/// Plan entry run by a packet; every switch computes the same one.
int select_subset(uint64_t packet_id, const ExecutionPlan& plan, HashSeed seed);

/// Position of one query's bits inside the global digest.
struct Slice {
  int query_id = 0;
  int offset = 0;
  int width = 0;
};

/// Contiguous slices ordered by query id.
std::vector<Slice> layout(const PlanEntry& entry, const std::vector<QuerySpec>& queries);

struct PacketDigest {
  uint64_t bits = 0;
  int width = 16;

  uint64_t get(const Slice& s) const;
  void set(const Slice& s, uint64_t value);
};

struct Packet {
  uint64_t id = 0;
  std::string flow;
  int ttl = 64;
  std::vector<uint8_t> payload;
  std::optional<PacketDigest> digest;

  size_t wire_bits() const { return payload.size() * 8 + (digest ? digest->width : 0); }
};

/// What a switch knows locally when a packet passes.
struct SwitchContext {
  uint64_t switch_id = 0;
  double hop_latency = 0.0;
  double link_utilization = 0.0;
  double timestamp = 0.0;
};

struct TelemetryRecord {
  uint64_t packet_id = 0;
  std::string flow;
  int subset = 0;
  std::map<int, uint64_t> slices;  // query id -> digest bits
  int hops = 0;                     // from the TTL decrement
};

/// Raised when a packet would carry more bits than the global budget.
class BudgetViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Source, switch and sink roles for one query set and plan.
class Pipeline {
 public:
  Pipeline(std::vector<QuerySpec> queries, ExecutionPlan plan, HashSeed seed, int initial_ttl = 64);

  Packet source(uint64_t packet_id, std::string flow, std::vector<uint8_t> payload = {}) const;
  /// Hop number comes from the TTL; the TTL is decremented on the way out.
  void switch_process(Packet& packet, const SwitchContext& ctx) const;
  /// Removes the digest and returns what the recording side keeps.
  TelemetryRecord sink_extract(Packet& packet) const;

  const std::vector<QuerySpec>& queries() const { return queries_; }
  const QuerySpec& query(int id) const;
  const QuerySpec& query(const std::string& name) const;
  const ExecutionPlan& plan() const { return plan_; }
  HashSeed seed() const { return seed_; }
  /// Seed of the hash streams a query's encoder and decoder share.
  HashSeed query_seed(int id) const;
  int initial_ttl() const { return initial_ttl_; }

 private:
  std::vector<QuerySpec> queries_;
  ExecutionPlan plan_;
  HashSeed seed_;
  int initial_ttl_;
  std::vector<std::vector<Slice>> layouts_;
  std::map<int, size_t> index_;
  std::map<int, StaticScheme> schemes_;
  std::map<int, MultCodec> codecs_;
};

/// Recording module: records partitioned by flow.
class RecordingStore {
 public:
  void record(TelemetryRecord r);
  size_t size() const { return rows_; }
  const std::vector<TelemetryRecord>& flow(const std::string& key) const;
  const std::map<std::string, std::vector<TelemetryRecord>>& flows() const { return flows_; }

 private:
  size_t rows_ = 0;
  std::map<std::string, std::vector<TelemetryRecord>> flows_;
};

/// Per-instance observations of a static query found in a flow's records.
std::vector<CodedObservation> static_observations(const std::vector<TelemetryRecord>& records,
                                                  const QuerySpec& q);

/// Query file: {"global_budget": 16, "queries": [...], "plan": [...]}; the
/// plan is optional and its entries name queries.
struct QueryFile {
  int global_budget = 16;
  std::vector<QuerySpec> queries;
  std::optional<ExecutionPlan> plan;
};

QueryFile parse_query_file(std::istream& in);
QueryFile load_query_file(const std::string& path);
std::string plan_to_json(const ExecutionPlan& plan, const std::vector<QuerySpec>& queries);

/// The shipped three-query example: path tracing on every packet, latency
/// quantiles on 15/16 of packets and HPCC utilization on the rest.
QueryFile combined_example();

}  // namespace pint
