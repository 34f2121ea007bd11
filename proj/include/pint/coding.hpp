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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pint/hashing.hpp"
#include "pint/hop_mask.hpp"

namespace pint {

// ---------------------------------------------------------------------------
// Scheme parameters
// ---------------------------------------------------------------------------

enum class Preset { kMainText, kAppendix, kRevisedTau, kCustom };

Preset parse_preset(const std::string& name);
std::string to_string(Preset p);

/// Base-2 iterated logarithm: number of log2 applications until x <= 1.
int log_star(double x);

/// Knuth's up-arrow tower e^e^...^e with `height` levels (height 0 is 1).
double e_tower(int height);

/// Layering of the static-aggregation code. Layer 0 is reservoir sampling
/// (the Baseline scheme); layers 1..L xor their block with probability p_l.
struct LayerParams {
  double tau = 1.0;                 // probability that a packet uses layer 0
  std::vector<double> layer_probs;  // p_1..p_L
  int d = 1;                        // typical path length the schedule was tuned for
  Preset preset = Preset::kCustom;

  int num_xor_layers() const { return static_cast<int>(layer_probs.size()); }

  /// Throws std::invalid_argument unless 0 < tau <= 1, every p_l is in
  /// (0,1], and tau < 1 implies at least one XOR layer.
  void validate() const;

  static LayerParams baseline_only();
  static LayerParams custom(double tau, std::vector<double> layer_probs);
};

LayerParams scheme_params(int d, Preset preset);

/// Undecoded-block schedule k_1 = k/log*(k), k_l = k_1/e^^(l-1). The encoders
/// never see it; it documents what each layer is expected to leave behind.
std::vector<double> undecoded_schedule(int k, int num_xor_layers);

/// Layer index in {0..L} for a packet; deterministic per (packet, seed).
int layer_select(uint64_t packet_id, const LayerParams& params, HashSeed seed);

// ---------------------------------------------------------------------------
// Encoding
// ---------------------------------------------------------------------------

enum class BlockMode {
  kHashed,  // blocks replaced by h(value, packet); decoded against a candidate set
  kRaw,     // blocks carried verbatim (fragmented when wider than the digest)
};

enum class ModifierDerivation {
  kPerHopHash,    // one g(p, i) evaluation per hop
  kBitVectorAnd,  // AND of t pseudo-random k-bit vectors, p rounded to 2^-t
};

struct StaticScheme {
  LayerParams params = LayerParams::baseline_only();
  int digest_bits = 64;  // per instance
  BlockMode mode = BlockMode::kRaw;
  int value_bits = 64;   // raw mode: width of a block before fragmentation
  int instances = 1;
  ModifierDerivation derivation = ModifierDerivation::kPerHopHash;

  int fragments() const;
  void validate() const;
};

struct StaticDigest {
  uint64_t bits = 0;
  int width = 64;
  uint32_t instance = 0;
};

/// Fragment number in {1..F} carried by a packet.
int fragment_index(uint64_t packet_id, int fragments, HashSeed seed);

/// Number of fragments needed to carry value_bits through budget_bits.
int fragment_count(int value_bits, int budget_bits);

/// What a hop contributes to the digest when it acts on the packet.
uint64_t block_contribution(uint64_t value, uint64_t packet_id, const StaticScheme& scheme,
                            HashSeed seed);

/// XOR-layer decision for hop `hop` in `layer` under the scheme's derivation.
bool xor_decision(uint64_t packet_id, int hop, int layer, const StaticScheme& scheme,
                  HashSeed seed);

/// One stateless switch step. `seed.instance` is replaced by the digest's.
StaticDigest encode_static_hop(StaticDigest digest, uint64_t packet_id, int hop,
                               uint64_t block_value, const StaticScheme& scheme, HashSeed seed);

/// Encodes a whole path from the all-zeros digest.
StaticDigest encode_static_path(uint64_t packet_id, std::span<const uint64_t> path,
                                const StaticScheme& scheme, HashSeed seed, uint32_t instance = 0);

/// Exponent t such that 2^-t is the power of two nearest to p.
int power_of_two_exponent(double p);

/// Hops (0-based bit positions) selected by ANDing t vectors derived from
/// (packet, layer). Per-hop inclusion probability is exactly 2^-t.
HopMask fast_modifier_set(uint64_t packet_id, int layer, int k, int t, HashSeed seed);
bool fast_hop_decision(uint64_t packet_id, int layer, int hop, int t, HashSeed seed);

// ---------------------------------------------------------------------------
// Decoding
// ---------------------------------------------------------------------------

struct CodedObservation {
  uint64_t packet_id = 0;
  uint64_t digest = 0;
  uint32_t instance = 0;

  friend bool operator==(const CodedObservation&, const CodedObservation&) = default;
};

/// What the decoder recomputes from (packet_id, scheme, k) alone.
struct ObservationInfo {
  int layer = 0;
  int fragment = 1;
  std::vector<int> modifiers;  // 1-based hop indices that acted on the packet
};

ObservationInfo describe_observation(const CodedObservation& obs, int k,
                                     const StaticScheme& scheme, HashSeed seed);

struct HopResult {
  bool decoded = false;
  uint64_t value = 0;
  // Surviving candidates (hashed mode only; empty when no evidence arrived yet).
  std::vector<uint64_t> candidates;
  bool contradiction = false;
};

/// Incremental candidate-pruning + XOR-peeling decoder for one flow.
///
/// Every observation becomes an equation: the xor of the contributions of
/// its modifier hops equals the digest. Contributions of decoded hops are
/// xored out as they become known.
///
/// Raw mode is classic peeling: an equation left with one unknown decodes
/// that (hop, fragment) unit directly.
///
/// Hashed mode keeps a candidate set per hop (initially all of V) and runs
/// constraint propagation. An equation whose unknowns have a small enough
/// joint candidate space is enumerated, and each hop keeps only the
/// candidates that appear in some assignment satisfying the equation. A
/// single-unknown equation is the plain pruning "v must hash to the digest".
/// Shrinking a hop's set revisits every equation it appears in. Pruning
/// never removes the true value, so a hop counts as decoded exactly when one
/// candidate survives.
///
/// Observations of all instances share the per-hop state, so candidate sets
/// merge by intersection.
class StaticDecoder {
 public:
  /// Joint candidate space an equation may enumerate, not counting the
  /// largest set (which is matched by hash lookup instead).
  static constexpr size_t kEnumerationLimit = 1024;
  /// Same limit when the largest set is still the whole universe.
  static constexpr size_t kUniverseEnumerationLimit = 8;

  StaticDecoder(int k, StaticScheme scheme, HashSeed seed,
                std::vector<uint64_t> candidates = {});

  void add(const CodedObservation& obs);

  bool complete() const { return decoded_units_ == num_units(); }
  bool contradiction() const { return contradiction_; }
  int decoded_hops() const;
  int path_length() const { return k_; }
  size_t observations() const { return observations_; }

  HopResult hop(int i) const;  // 1-based
  std::vector<HopResult> results() const;
  /// Decoded values for all hops once complete().
  std::optional<std::vector<uint64_t>> values() const;

 private:
  struct Equation {
    uint64_t packet_id;
    uint32_t instance;
    uint64_t residual;
    std::vector<int> unknown;  // unit indices
    bool done = false;
  };

  int num_units() const { return k_ * fragments_; }
  int unit_of(int hop, int fragment) const { return (hop - 1) * fragments_ + (fragment - 1); }
  HashSeed instance_seed(uint32_t instance) const { return HashSeed{seed_.seed, instance}; }
  uint64_t contribution(int unit, uint64_t packet_id, uint32_t instance) const;
  size_t domain_size(int unit) const;
  const std::vector<uint64_t>& domain(int unit) const;
  void evaluate(int eq);
  void evaluate_hashed(Equation& eq);
  void restrict(int unit, std::vector<uint64_t> values);
  void settle(int unit, uint64_t value);
  void drain();

  int k_;
  StaticScheme scheme_;
  HashSeed seed_;
  std::vector<uint64_t> universe_;
  int fragments_;

  std::vector<char> known_;
  std::vector<uint64_t> value_;
  std::vector<char> has_candidates_;
  std::vector<std::vector<uint64_t>> candidates_;
  std::vector<char> unit_contradiction_;
  std::vector<std::vector<int>> waiting_;  // unit -> equations it appears in
  std::vector<Equation> equations_;
  std::vector<int> worklist_;  // units whose state changed
  int decoded_units_ = 0;
  bool contradiction_ = false;
  size_t observations_ = 0;
};

std::vector<HopResult> decode_static(std::span<const CodedObservation> observations, int k,
                                     std::span<const uint64_t> candidates,
                                     const StaticScheme& scheme, HashSeed seed);

/// True iff the observation disagrees with what the known path would have
/// produced on this packet.
bool detect_path_change(std::span<const uint64_t> known_path, const CodedObservation& obs,
                        const StaticScheme& scheme, HashSeed seed);

// Newline-delimited "packet_id instance digest-hex" records.
void write_observations(std::ostream& out, std::span<const CodedObservation> observations);
std::vector<CodedObservation> read_observations(std::istream& in);

// One value per line, decimal or 0x-prefixed hex; '#' starts a comment.
std::vector<uint64_t> read_candidates(std::istream& in);

}  // namespace pint
