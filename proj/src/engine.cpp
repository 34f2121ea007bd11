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

#include "pint/engine.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "pint/dynamic_agg.hpp"

namespace pint {

namespace {

constexpr double kProbTolerance = 1e-9;

}  // namespace

std::string to_string(ValueKind v) {
  switch (v) {
    case ValueKind::kSwitchId: return "switch_id";
    case ValueKind::kHopLatency: return "hop_latency";
    case ValueKind::kLinkUtilization: return "link_utilization";
    case ValueKind::kTimestamp: return "timestamp";
  }
  return "switch_id";
}

std::string to_string(AggKind a) {
  switch (a) {
    case AggKind::kPerPacket: return "per_packet";
    case AggKind::kStaticPerFlow: return "static_per_flow";
    case AggKind::kDynamicPerFlow: return "dynamic_per_flow";
  }
  return "per_packet";
}

ValueKind parse_value_kind(const std::string& s) {
  for (auto v : {ValueKind::kSwitchId, ValueKind::kHopLatency, ValueKind::kLinkUtilization,
                 ValueKind::kTimestamp})
    if (to_string(v) == s) return v;
  throw std::invalid_argument("unknown value kind '" + s + "'");
}

AggKind parse_agg_kind(const std::string& s) {
  for (auto a : {AggKind::kPerPacket, AggKind::kStaticPerFlow, AggKind::kDynamicPerFlow})
    if (to_string(a) == s) return a;
  throw std::invalid_argument("unknown aggregation '" + s + "'");
}

MultCodec QuerySpec::codec() const {
  MultCodec c;
  c.eps = epsilon;
  c.bits = bit_budget;
  if (value == ValueKind::kLinkUtilization) {
    c.lo = 0x1p-10;
    c.hi = 0x1p6;
  } else {
    c.lo = 1.0;
    c.hi = 0x1p16;
  }
  if (range_lo) c.lo = *range_lo;
  if (range_hi) c.hi = *range_hi;
  c.validate();
  return c;
}

StaticScheme QuerySpec::static_scheme() const {
  StaticScheme s;
  s.params = scheme_params(d, preset);
  s.mode = mode;
  s.instances = instances;
  s.digest_bits = bit_budget / instances;
  s.value_bits = 64;
  s.validate();
  return s;
}

void QuerySpec::validate(int global_budget) const {
  auto bad = [&](const std::string& msg) { throw PlanError("query '" + name + "': " + msg); };
  if (bit_budget < 1) bad("bit_budget must be >= 1");
  if (bit_budget > global_budget) bad("bit_budget exceeds the global budget");
  if (!(frequency > 0.0 && frequency <= 1.0)) bad("frequency must lie in (0,1]");
  if ((agg == AggKind::kStaticPerFlow) != (value == ValueKind::kSwitchId))
    bad("switch ids aggregate statically per flow; other values do not");
  if (agg == AggKind::kStaticPerFlow) {
    if (instances < 1 || bit_budget % instances != 0)
      bad("instances must divide the bit budget");
    static_scheme();
  } else {
    codec();
  }
}

double ExecutionPlan::frequency_of(int id) const {
  double f = 0.0;
  for (const auto& e : entries)
    if (std::find(e.queries.begin(), e.queries.end(), id) != e.queries.end()) f += e.probability;
  return f;
}

ExecutionPlan compile_plan(const std::vector<QuerySpec>& queries, int global_budget) {
  if (global_budget < 1 || global_budget > 64) throw PlanError("global budget must be in [1,64]");
  for (const auto& q : queries) q.validate(global_budget);

  struct Segment {
    double lo, hi;
    int used;
    std::vector<int> ids;
  };
  std::vector<Segment> segs{{0.0, 1.0, 0, {}}};

  std::vector<const QuerySpec*> order;
  for (const auto& q : queries) order.push_back(&q);
  std::stable_sort(order.begin(), order.end(),
                   [](const QuerySpec* a, const QuerySpec* b) { return a->frequency > b->frequency; });

  for (const QuerySpec* q : order) {
    double need = q->frequency;
    for (size_t i = 0; i < segs.size() && need > kProbTolerance; ++i) {
      if (segs[i].used + q->bit_budget > global_budget) continue;
      const double len = segs[i].hi - segs[i].lo;
      if (len > need + kProbTolerance) {
        Segment tail = segs[i];
        segs[i].hi = segs[i].lo + need;
        tail.lo = segs[i].hi;
        segs.insert(segs.begin() + static_cast<std::ptrdiff_t>(i) + 1, tail);
      }
      segs[i].used += q->bit_budget;
      segs[i].ids.push_back(q->id);
      need -= segs[i].hi - segs[i].lo;
    }
    if (need > kProbTolerance) {
      std::ostringstream msg;
      msg << "cannot schedule query '" << q->name << "' at frequency " << q->frequency << ": only "
          << q->frequency - need << " of the packets have " << q->bit_budget << " free bits";
      throw PlanError(msg.str());
    }
  }

  ExecutionPlan plan;
  plan.global_budget = global_budget;
  for (auto& s : segs) {
    std::sort(s.ids.begin(), s.ids.end());
    const double p = s.hi - s.lo;
    if (p <= kProbTolerance) continue;
    auto it = std::find_if(plan.entries.begin(), plan.entries.end(),
                           [&](const PlanEntry& e) { return e.queries == s.ids; });
    if (it != plan.entries.end()) it->probability += p;
    else plan.entries.push_back(PlanEntry{s.ids, p});
  }
  validate_plan(plan, queries);
  return plan;
}

void validate_plan(const ExecutionPlan& plan, const std::vector<QuerySpec>& queries) {
  if (plan.global_budget < 1 || plan.global_budget > 64) throw PlanError("global budget must be in [1,64]");
  if (plan.entries.empty()) throw PlanError("plan has no entries");
  std::map<int, const QuerySpec*> by_id;
  for (const auto& q : queries) {
    if (!by_id.emplace(q.id, &q).second) throw PlanError("duplicate query id " + std::to_string(q.id));
  }
  double total = 0.0;
  for (size_t i = 0; i < plan.entries.size(); ++i) {
    const auto& e = plan.entries[i];
    if (!(e.probability >= 0.0)) throw PlanError("entry " + std::to_string(i) + " has a negative probability");
    total += e.probability;
    int bits = 0;
    for (int id : e.queries) {
      auto it = by_id.find(id);
      if (it == by_id.end()) throw PlanError("entry " + std::to_string(i) + " names unknown query " + std::to_string(id));
      bits += it->second->bit_budget;
    }
    if (bits > plan.global_budget)
      throw PlanError("entry " + std::to_string(i) + " needs " + std::to_string(bits) + " bits, budget is " +
                      std::to_string(plan.global_budget));
  }
  if (std::abs(total - 1.0) > 1e-6) throw PlanError("entry probabilities sum to " + std::to_string(total));
  for (const auto& q : queries)
    if (plan.frequency_of(q.id) + 1e-6 < q.frequency)
      throw PlanError("query '" + q.name + "' runs on " + std::to_string(plan.frequency_of(q.id)) +
                      " of packets, below its frequency " + std::to_string(q.frequency));
}

int select_subset(uint64_t packet_id, const ExecutionPlan& plan, HashSeed seed) {
  const double u = hash_unit(packet_id, seed, HashRole::kQuerySelect).as_unit();
  double acc = 0.0;
  for (size_t i = 0; i < plan.entries.size(); ++i) {
    acc += plan.entries[i].probability;
    if (u < acc) return static_cast<int>(i);
  }
  return static_cast<int>(plan.entries.size()) - 1;
}

std::vector<Slice> layout(const PlanEntry& entry, const std::vector<QuerySpec>& queries) {
  std::vector<int> ids = entry.queries;
  std::sort(ids.begin(), ids.end());
  std::vector<Slice> out;
  int offset = 0;
  for (int id : ids) {
    auto it = std::find_if(queries.begin(), queries.end(), [&](const QuerySpec& q) { return q.id == id; });
    if (it == queries.end()) throw PlanError("layout: unknown query " + std::to_string(id));
    out.push_back(Slice{id, offset, it->bit_budget});
    offset += it->bit_budget;
  }
  return out;
}

uint64_t PacketDigest::get(const Slice& s) const { return (bits >> s.offset) & low_mask(s.width); }

void PacketDigest::set(const Slice& s, uint64_t value) {
  if (s.offset + s.width > width) throw BudgetViolation("slice extends past the digest");
  if (value & ~low_mask(s.width)) throw BudgetViolation("value wider than its slice");
  const uint64_t m = low_mask(s.width) << s.offset;
  bits = (bits & ~m) | (value << s.offset);
}

// ---------------------------------------------------------------------------

Pipeline::Pipeline(std::vector<QuerySpec> queries, ExecutionPlan plan, HashSeed seed, int initial_ttl)
    : queries_(std::move(queries)), plan_(std::move(plan)), seed_(seed), initial_ttl_(initial_ttl) {
  validate_plan(plan_, queries_);
  for (size_t i = 0; i < queries_.size(); ++i) {
    const auto& q = queries_[i];
    q.validate(plan_.global_budget);
    index_[q.id] = i;
    if (q.agg == AggKind::kStaticPerFlow) schemes_.emplace(q.id, q.static_scheme());
    else codecs_.emplace(q.id, q.codec());
  }
  for (const auto& e : plan_.entries) layouts_.push_back(layout(e, queries_));
}

const QuerySpec& Pipeline::query(int id) const { return queries_.at(index_.at(id)); }

const QuerySpec& Pipeline::query(const std::string& name) const {
  for (const auto& q : queries_)
    if (q.name == name) return q;
  throw std::out_of_range("no query named '" + name + "'");
}

HashSeed Pipeline::query_seed(int id) const {
  return HashSeed{mix64(seed_.seed ^ mix64(0x7175657279ULL + static_cast<uint64_t>(id))), 0};
}

Packet Pipeline::source(uint64_t packet_id, std::string flow, std::vector<uint8_t> payload) const {
  Packet p;
  p.id = packet_id;
  p.flow = std::move(flow);
  p.ttl = initial_ttl_;
  p.payload = std::move(payload);
  p.digest = PacketDigest{0, plan_.global_budget};
  return p;
}

void Pipeline::switch_process(Packet& packet, const SwitchContext& ctx) const {
  if (!packet.digest) throw std::logic_error("switch_process: packet carries no digest");
  if (packet.ttl <= 0) throw std::logic_error("switch_process: TTL expired");
  PacketDigest& dig = *packet.digest;
  if (dig.width != plan_.global_budget) throw BudgetViolation("digest width differs from the global budget");
  const int hop = initial_ttl_ - packet.ttl + 1;
  const int subset = select_subset(packet.id, plan_, seed_);
  int bits = 0;
  for (const Slice& s : layouts_[static_cast<size_t>(subset)]) {
    bits += s.width;
    if (bits > plan_.global_budget) throw BudgetViolation("subset exceeds the global budget");
    const QuerySpec& q = query(s.query_id);
    const HashSeed qs = query_seed(q.id);
    uint64_t v = dig.get(s);
    switch (q.agg) {
      case AggKind::kStaticPerFlow: {
        const StaticScheme& sch = schemes_.at(q.id);
        const int w = sch.digest_bits;
        uint64_t out = 0;
        for (int j = 0; j < sch.instances; ++j) {
          StaticDigest sd{(v >> (j * w)) & low_mask(w), w, static_cast<uint32_t>(j)};
          sd = encode_static_hop(sd, packet.id, hop, ctx.switch_id, sch, qs);
          out |= sd.bits << (j * w);
        }
        v = out;
        break;
      }
      case AggKind::kDynamicPerFlow:
      case AggKind::kPerPacket: {
        double local = 0.0;
        switch (q.value) {
          case ValueKind::kHopLatency: local = ctx.hop_latency; break;
          case ValueKind::kLinkUtilization: local = ctx.link_utilization; break;
          case ValueKind::kTimestamp: local = ctx.timestamp; break;
          case ValueKind::kSwitchId: local = static_cast<double>(ctx.switch_id); break;
        }
        // The rounding coin is per (packet, hop) so hops round independently.
        const uint64_t coin_key = absorb(packet.id, static_cast<uint64_t>(hop));
        const uint64_t idx = codecs_.at(q.id).encode_randomized(local, coin_key, qs).index;
        v = q.agg == AggKind::kPerPacket ? per_packet_max(v, idx)
                                         : reservoir_encode(v, packet.id, hop, idx, qs);
        break;
      }
    }
    dig.set(s, v);
  }
  --packet.ttl;
}

TelemetryRecord Pipeline::sink_extract(Packet& packet) const {
  if (!packet.digest) throw std::logic_error("sink_extract: packet carries no digest");
  TelemetryRecord r;
  r.packet_id = packet.id;
  r.flow = packet.flow;
  r.subset = select_subset(packet.id, plan_, seed_);
  r.hops = initial_ttl_ - packet.ttl;
  for (const Slice& s : layouts_[static_cast<size_t>(r.subset)]) r.slices[s.query_id] = packet.digest->get(s);
  packet.digest.reset();
  return r;
}

void RecordingStore::record(TelemetryRecord r) {
  ++rows_;
  flows_[r.flow].push_back(std::move(r));
}

const std::vector<TelemetryRecord>& RecordingStore::flow(const std::string& key) const {
  static const std::vector<TelemetryRecord> kEmpty;
  auto it = flows_.find(key);
  return it == flows_.end() ? kEmpty : it->second;
}

std::vector<CodedObservation> static_observations(const std::vector<TelemetryRecord>& records,
                                                  const QuerySpec& q) {
  const int w = q.bit_budget / q.instances;
  std::vector<CodedObservation> out;
  for (const auto& r : records) {
    auto it = r.slices.find(q.id);
    if (it == r.slices.end()) continue;
    for (int j = 0; j < q.instances; ++j)
      out.push_back(CodedObservation{r.packet_id, (it->second >> (j * w)) & low_mask(w), static_cast<uint32_t>(j)});
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

using nlohmann::json;

double parse_probability(const json& j, const std::string& what) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    const auto slash = s.find('/');
    try {
      if (slash == std::string::npos) return std::stod(s);
      const double num = std::stod(s.substr(0, slash)), den = std::stod(s.substr(slash + 1));
      if (den == 0.0) throw std::invalid_argument("zero denominator");
      return num / den;
    } catch (const std::exception&) {
    }
  }
  throw std::invalid_argument(what + ": expected a number or 'a/b'");
}

QuerySpec parse_query(const json& j, int default_id) {
  QuerySpec q;
  q.id = j.value("id", default_id);
  q.name = j.value("name", "q" + std::to_string(q.id));
  q.value = parse_value_kind(j.at("value").get<std::string>());
  q.agg = parse_agg_kind(j.at("agg").get<std::string>());
  q.bit_budget = j.at("bit_budget").get<int>();
  if (j.contains("space_budget")) q.space_budget = j["space_budget"].get<uint64_t>();
  if (j.contains("flow_def")) q.flow_def = j["flow_def"].get<std::vector<std::string>>();
  if (j.contains("frequency")) q.frequency = parse_probability(j["frequency"], q.name + ".frequency");
  q.instances = j.value("instances", q.instances);
  q.d = j.value("d", q.d);
  if (j.contains("preset")) q.preset = parse_preset(j["preset"].get<std::string>());
  if (j.contains("mode")) {
    const std::string m = j["mode"].get<std::string>();
    if (m == "hashed") q.mode = BlockMode::kHashed;
    else if (m == "raw") q.mode = BlockMode::kRaw;
    else throw std::invalid_argument(q.name + ".mode: expected 'hashed' or 'raw'");
  }
  q.epsilon = j.value("epsilon", q.epsilon);
  if (j.contains("range")) {
    const auto r = j["range"].get<std::vector<double>>();
    if (r.size() != 2) throw std::invalid_argument(q.name + ".range: expected [lo, hi]");
    q.range_lo = r[0];
    q.range_hi = r[1];
  }
  return q;
}

}  // namespace

QueryFile parse_query_file(std::istream& in) {
  json j;
  try {
    j = json::parse(in, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("query file: ") + e.what());
  }
  QueryFile f;
  try {
    f.global_budget = j.value("global_budget", 16);
    int next = 0;
    for (const auto& qj : j.at("queries")) f.queries.push_back(parse_query(qj, next++));
    if (j.contains("plan")) {
      ExecutionPlan plan;
      plan.global_budget = f.global_budget;
      for (const auto& ej : j["plan"]) {
        PlanEntry e;
        for (const auto& name : ej.at("queries")) {
          const std::string n = name.get<std::string>();
          auto it = std::find_if(f.queries.begin(), f.queries.end(), [&](const QuerySpec& q) { return q.name == n; });
          if (it == f.queries.end()) throw PlanError("plan names unknown query '" + n + "'");
          e.queries.push_back(it->id);
        }
        std::sort(e.queries.begin(), e.queries.end());
        e.probability = parse_probability(ej.at("probability"), "plan.probability");
        plan.entries.push_back(std::move(e));
      }
      validate_plan(plan, f.queries);
      f.plan = std::move(plan);
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("query file: ") + e.what());
  }
  for (const auto& q : f.queries) q.validate(f.global_budget);
  return f;
}

QueryFile load_query_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open query file '" + path + "'");
  return parse_query_file(in);
}

std::string plan_to_json(const ExecutionPlan& plan, const std::vector<QuerySpec>& queries) {
  json entries = json::array();
  for (const auto& e : plan.entries) {
    json names = json::array();
    for (int id : e.queries)
      for (const auto& q : queries)
        if (q.id == id) names.push_back(q.name);
    entries.push_back({{"queries", names}, {"probability", e.probability}});
  }
  return json{{"global_budget", plan.global_budget}, {"plan", entries}}.dump(2);
}

QueryFile combined_example() {
  QueryFile f;
  f.global_budget = 16;
  QuerySpec path;
  path.id = 0;
  path.name = "path";
  path.value = ValueKind::kSwitchId;
  path.agg = AggKind::kStaticPerFlow;
  path.bit_budget = 8;
  path.frequency = 1.0;
  path.d = 5;
  QuerySpec lat;
  lat.id = 1;
  lat.name = "latency";
  lat.value = ValueKind::kHopLatency;
  lat.agg = AggKind::kDynamicPerFlow;
  lat.bit_budget = 8;
  lat.frequency = 15.0 / 16.0;
  QuerySpec hpcc;
  hpcc.id = 2;
  hpcc.name = "hpcc";
  hpcc.value = ValueKind::kLinkUtilization;
  hpcc.agg = AggKind::kPerPacket;
  hpcc.bit_budget = 8;
  hpcc.frequency = 1.0 / 16.0;
  f.queries = {path, lat, hpcc};
  f.plan = compile_plan(f.queries, f.global_budget);
  return f;
}

}  // namespace pint
