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

#include "pint/coding.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace pint {

Preset parse_preset(const std::string& name) {
  std::string n;
  for (char c : name) n += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (n == "maintext" || n == "main") return Preset::kMainText;
  if (n == "appendix") return Preset::kAppendix;
  if (n == "revisedtau" || n == "revised") return Preset::kRevisedTau;
  if (n == "custom") return Preset::kCustom;
  throw std::invalid_argument("unknown preset '" + name + "'");
}

std::string to_string(Preset p) {
  switch (p) {
    case Preset::kMainText: return "maintext";
    case Preset::kAppendix: return "appendix";
    case Preset::kRevisedTau: return "revisedtau";
    case Preset::kCustom: return "custom";
  }
  return "custom";
}

int log_star(double x) {
  int n = 0;
  while (x > 1.0) {
    x = std::log2(x);
    ++n;
  }
  return n;
}

double e_tower(int height) {
  double v = 1.0;
  for (int i = 0; i < height; ++i) {
    v = std::exp(v);
    if (std::isinf(v)) break;
  }
  return v;
}

void LayerParams::validate() const {
  if (!(tau > 0.0 && tau <= 1.0)) throw std::invalid_argument("LayerParams: tau must lie in (0,1]");
  if (tau < 1.0 && layer_probs.empty())
    throw std::invalid_argument("LayerParams: tau < 1 requires at least one XOR layer");
  for (double p : layer_probs)
    if (!(p > 0.0 && p <= 1.0))
      throw std::invalid_argument("LayerParams: layer probabilities must lie in (0,1]");
}

LayerParams LayerParams::baseline_only() { return LayerParams{}; }

LayerParams LayerParams::custom(double tau, std::vector<double> layer_probs) {
  LayerParams p;
  p.tau = tau;
  p.layer_probs = std::move(layer_probs);
  p.preset = Preset::kCustom;
  p.validate();
  return p;
}

namespace {

double clamp_prob(double p) {
  if (!(p > 0.0) || std::isinf(p)) return 1.0;
  return std::min(p, 1.0);
}

// d / log*(d), clamped to >= 1.
double xor_target(int d) {
  const int ls = log_star(d);
  if (ls == 0) return std::max(1.0, static_cast<double>(d));
  return std::max(1.0, static_cast<double>(d) / ls);
}

int appendix_layers(int d) {
  int layers = 1;
  while (static_cast<double>(d) > std::floor(e_tower(layers + 1))) ++layers;
  return layers;
}

}  // namespace

LayerParams scheme_params(int d, Preset preset) {
  if (d < 1) throw std::invalid_argument("scheme_params: d must be >= 1");
  LayerParams p;
  p.d = d;
  p.preset = preset;
  switch (preset) {
    case Preset::kMainText: {
      // Natural logarithms: ln ln d < 1 exactly when d < e^e, i.e. d <= 15.
      const double ln_d = std::log(static_cast<double>(d));
      p.tau = 0.75;
      p.layer_probs = {clamp_prob(d > 15 ? std::log(ln_d) / ln_d : 1.0 / ln_d)};
      break;
    }
    case Preset::kAppendix:
    case Preset::kRevisedTau: {
      const double target = xor_target(d);
      const int layers = appendix_layers(d);
      for (int l = 1; l <= layers; ++l) p.layer_probs.push_back(clamp_prob(e_tower(l - 1) / target));
      if (preset == Preset::kAppendix) {
        const double ll = std::log2(std::max(2, log_star(target)));
        p.tau = 1.0 - 1.0 / (1.0 + ll);
      } else {
        const double ll = std::log2(std::max(1, log_star(d)));
        p.tau = (1.0 + ll) / (2.0 + ll);
      }
      break;
    }
    case Preset::kCustom:
      throw std::invalid_argument("scheme_params: custom preset has no formula; use LayerParams::custom");
  }
  p.validate();
  return p;
}

std::vector<double> undecoded_schedule(int k, int num_xor_layers) {
  std::vector<double> out;
  if (num_xor_layers < 1) return out;
  const double k1 = static_cast<double>(k) / std::max(1, log_star(k));
  for (int l = 1; l <= num_xor_layers; ++l) out.push_back(k1 / e_tower(l - 1));
  return out;
}

int layer_select(uint64_t packet_id, const LayerParams& params, HashSeed seed) {
  const int layers = params.num_xor_layers();
  if (layers == 0) return 0;
  const UnitHash h = hash_unit(packet_id, seed, HashRole::kLayer);
  if (h.at_most(params.tau)) return 0;
  const double frac = (h.as_unit() - params.tau) / (1.0 - params.tau);
  const int layer = static_cast<int>(std::ceil(layers * frac));
  return std::clamp(layer, 1, layers);
}

int StaticScheme::fragments() const {
  return mode == BlockMode::kRaw ? fragment_count(value_bits, digest_bits) : 1;
}

void StaticScheme::validate() const {
  params.validate();
  if (digest_bits < 1 || digest_bits > 64)
    throw std::invalid_argument("StaticScheme: digest_bits must be in [1,64]");
  if (value_bits < 1 || value_bits > 64)
    throw std::invalid_argument("StaticScheme: value_bits must be in [1,64]");
  if (instances < 1) throw std::invalid_argument("StaticScheme: instances must be >= 1");
}

int fragment_count(int value_bits, int budget_bits) {
  if (budget_bits < 1) throw std::invalid_argument("fragment_count: budget must be >= 1");
  return (value_bits + budget_bits - 1) / budget_bits;
}

int fragment_index(uint64_t packet_id, int fragments, HashSeed seed) {
  if (fragments < 1) throw std::invalid_argument("fragment_index: F must be >= 1");
  if (fragments == 1) return 1;
  const uint64_t raw = hash_unit(packet_id, seed, HashRole::kFragment).raw;
  __extension__ using u128 = unsigned __int128;
  const u128 wide = static_cast<u128>(raw) * static_cast<unsigned>(fragments);
  return static_cast<int>(wide >> 64) + 1;
}

uint64_t block_contribution(uint64_t value, uint64_t packet_id, const StaticScheme& scheme,
                            HashSeed seed) {
  if (scheme.mode == BlockMode::kHashed)
    return value_hash(value, packet_id, scheme.digest_bits, seed);
  const int f = fragment_index(packet_id, scheme.fragments(), seed);
  const int shift = (f - 1) * scheme.digest_bits;
  return shift >= 64 ? 0 : (value >> shift) & low_mask(scheme.digest_bits);
}

int power_of_two_exponent(double p) {
  if (!(p > 0.0)) throw std::invalid_argument("power_of_two_exponent: p must be > 0");
  return std::max(0, static_cast<int>(std::lround(-std::log2(p))));
}

namespace {

uint64_t vector_word(uint64_t packet_id, int layer, int j, int w, HashSeed seed) {
  const uint64_t words[] = {packet_id, static_cast<uint64_t>(layer), static_cast<uint64_t>(j),
                            static_cast<uint64_t>(w)};
  return hash_words(words, seed, HashRole::kBitVector);
}

}  // namespace

HopMask fast_modifier_set(uint64_t packet_id, int layer, int k, int t, HashSeed seed) {
  if (k < 1 || k > HopMask::kMaxBits)
    throw std::invalid_argument("fast_modifier_set: k must be in [1,256]");
  if (t < 0) throw std::invalid_argument("fast_modifier_set: t must be >= 0");
  HopMask acc = HopMask::all(k);
  const int words = (k + 63) / 64;
  for (int j = 0; j < t; ++j)
    for (int w = 0; w < words; ++w) acc.word(w) &= vector_word(packet_id, layer, j, w, seed);
  return acc;
}

bool fast_hop_decision(uint64_t packet_id, int layer, int hop, int t, HashSeed seed) {
  if (hop < 1 || hop > HopMask::kMaxBits)
    throw std::invalid_argument("fast_hop_decision: hop must be in [1,256]");
  const int bit = hop - 1;
  for (int j = 0; j < t; ++j)
    if (!((vector_word(packet_id, layer, j, bit >> 6, seed) >> (bit & 63)) & 1U)) return false;
  return true;
}

bool xor_decision(uint64_t packet_id, int hop, int layer, const StaticScheme& scheme,
                  HashSeed seed) {
  const double p = scheme.params.layer_probs.at(layer - 1);
  if (scheme.derivation == ModifierDerivation::kBitVectorAnd)
    return fast_hop_decision(packet_id, layer, hop, power_of_two_exponent(p), seed);
  return hop_hash(packet_id, hop, seed).at_most(p);
}

StaticDigest encode_static_hop(StaticDigest digest, uint64_t packet_id, int hop,
                               uint64_t block_value, const StaticScheme& scheme, HashSeed seed) {
  seed.instance = digest.instance;
  const int layer = layer_select(packet_id, scheme.params, seed);
  if (layer == 0) {
    if (hop_hash(packet_id, hop, seed).at_most(1.0 / hop))
      digest.bits = block_contribution(block_value, packet_id, scheme, seed);
  } else if (xor_decision(packet_id, hop, layer, scheme, seed)) {
    digest.bits ^= block_contribution(block_value, packet_id, scheme, seed);
  }
  digest.bits &= low_mask(digest.width);
  return digest;
}

StaticDigest encode_static_path(uint64_t packet_id, std::span<const uint64_t> path,
                                const StaticScheme& scheme, HashSeed seed, uint32_t instance) {
  StaticDigest d{0, scheme.digest_bits, instance};
  for (size_t i = 0; i < path.size(); ++i)
    d = encode_static_hop(d, packet_id, static_cast<int>(i + 1), path[i], scheme, seed);
  return d;
}

namespace {

int reservoir_writer(uint64_t packet_id, int k, HashSeed seed) {
  for (int i = k; i > 1; --i)
    if (hop_hash(packet_id, i, seed).at_most(1.0 / i)) return i;
  return 1;
}

}  // namespace

ObservationInfo describe_observation(const CodedObservation& obs, int k,
                                     const StaticScheme& scheme, HashSeed seed) {
  seed.instance = obs.instance;
  ObservationInfo info;
  info.layer = layer_select(obs.packet_id, scheme.params, seed);
  info.fragment =
      scheme.mode == BlockMode::kRaw ? fragment_index(obs.packet_id, scheme.fragments(), seed) : 1;
  if (info.layer == 0) {
    info.modifiers.push_back(reservoir_writer(obs.packet_id, k, seed));
  } else if (scheme.derivation == ModifierDerivation::kBitVectorAnd) {
    const double p = scheme.params.layer_probs.at(info.layer - 1);
    const HopMask m =
        fast_modifier_set(obs.packet_id, info.layer, k, power_of_two_exponent(p), seed);
    for (int b : m.bits()) info.modifiers.push_back(b + 1);
  } else {
    const double p = scheme.params.layer_probs.at(info.layer - 1);
    const uint64_t thr = unit_threshold(p);
    for (int i = 1; i <= k; ++i)
      if (hop_hash(obs.packet_id, i, seed).raw <= thr) info.modifiers.push_back(i);
  }
  return info;
}

// ---------------------------------------------------------------------------

StaticDecoder::StaticDecoder(int k, StaticScheme scheme, HashSeed seed,
                             std::vector<uint64_t> candidates)
    : k_(k), scheme_(std::move(scheme)), seed_(seed), universe_(std::move(candidates)) {
  if (k_ < 1) throw std::invalid_argument("StaticDecoder: k must be >= 1");
  scheme_.validate();
  if (scheme_.mode == BlockMode::kHashed && universe_.empty())
    throw std::invalid_argument("StaticDecoder: hashed mode needs a non-empty candidate set");
  std::sort(universe_.begin(), universe_.end());
  universe_.erase(std::unique(universe_.begin(), universe_.end()), universe_.end());
  fragments_ = scheme_.fragments();
  const int n = num_units();
  known_.assign(n, 0);
  value_.assign(n, 0);
  has_candidates_.assign(n, 0);
  candidates_.resize(n);
  unit_contradiction_.assign(n, 0);
  waiting_.resize(n);
}

uint64_t StaticDecoder::contribution(int unit, uint64_t packet_id, uint32_t instance) const {
  if (scheme_.mode == BlockMode::kRaw) return value_[unit];
  return value_hash(value_[unit], packet_id, scheme_.digest_bits, instance_seed(instance));
}

size_t StaticDecoder::domain_size(int unit) const {
  return has_candidates_[unit] ? candidates_[unit].size() : universe_.size();
}

const std::vector<uint64_t>& StaticDecoder::domain(int unit) const {
  return has_candidates_[unit] ? candidates_[unit] : universe_;
}

void StaticDecoder::settle(int unit, uint64_t value) {
  known_[unit] = 1;
  value_[unit] = value;
  ++decoded_units_;
  worklist_.push_back(unit);
}

// Narrows a hop's candidates to `values` (a subset of its current domain).
void StaticDecoder::restrict(int unit, std::vector<uint64_t> values) {
  if (has_candidates_[unit] && values.size() == candidates_[unit].size()) return;
  has_candidates_[unit] = 1;
  candidates_[unit] = std::move(values);
  if (candidates_[unit].empty()) {
    unit_contradiction_[unit] = 1;
    contradiction_ = true;
    return;
  }
  if (candidates_[unit].size() == 1) settle(unit, candidates_[unit].front());
  else worklist_.push_back(unit);
}

void StaticDecoder::evaluate(int idx) {
  Equation& eq = equations_[idx];
  if (eq.done) return;
  // Fold in everything decoded since the equation was last looked at.
  std::erase_if(eq.unknown, [&](int u) {
    if (!known_[u]) return false;
    eq.residual ^= contribution(u, eq.packet_id, eq.instance);
    return true;
  });
  if (eq.unknown.empty()) {
    eq.done = true;
    if (eq.residual != 0) contradiction_ = true;
    return;
  }
  if (scheme_.mode == BlockMode::kRaw) {
    if (eq.unknown.size() == 1) {
      eq.done = true;
      settle(eq.unknown.front(), eq.residual);
    }
    return;
  }
  evaluate_hashed(eq);
}

void StaticDecoder::evaluate_hashed(Equation& eq) {
  for (int u : eq.unknown) {
    if (unit_contradiction_[u]) {  // nothing sound left to infer from it
      eq.done = true;
      return;
    }
  }
  // The largest domain is matched by hash lookup; the rest are enumerated.
  std::vector<int> units = eq.unknown;
  std::sort(units.begin(), units.end(),
            [&](int a, int b) { return domain_size(a) < domain_size(b); });
  const int last = units.back();
  units.pop_back();
  const size_t limit = has_candidates_[last] ? kEnumerationLimit : kUniverseEnumerationLimit;
  size_t space = 1;
  for (int u : units) {
    space *= domain_size(u);
    if (space > limit) return;  // wait until the domains shrink
  }

  const HashSeed s = instance_seed(eq.instance);
  const int bits = scheme_.digest_bits;
  auto hashes_of = [&](int u) {
    std::vector<uint64_t> h;
    for (uint64_t v : domain(u)) h.push_back(value_hash(v, eq.packet_id, bits, s));
    return h;
  };
  const std::vector<uint64_t> last_hashes = hashes_of(last);
  std::unordered_set<uint64_t> last_set(last_hashes.begin(), last_hashes.end());

  std::vector<std::vector<uint64_t>> hashes;
  std::vector<std::vector<char>> support;
  for (int u : units) {
    hashes.push_back(hashes_of(u));
    support.emplace_back(domain_size(u), 0);
  }
  std::unordered_set<uint64_t> wanted;  // digests the last unit may take
  std::vector<size_t> pick(units.size(), 0);
  for (size_t combo = 0; combo < space; ++combo) {
    uint64_t x = eq.residual;
    size_t rest = combo;
    for (size_t j = 0; j < units.size(); ++j) {
      pick[j] = rest % hashes[j].size();
      rest /= hashes[j].size();
      x ^= hashes[j][pick[j]];
    }
    if (!last_set.count(x)) continue;
    wanted.insert(x);
    for (size_t j = 0; j < units.size(); ++j) support[j][pick[j]] = 1;
  }

  // Gather every narrowing before applying any, since the domains are shared.
  std::vector<std::pair<int, std::vector<uint64_t>>> updates;
  for (size_t j = 0; j < units.size(); ++j) {
    const auto& dom = domain(units[j]);
    std::vector<uint64_t> keep;
    for (size_t i = 0; i < dom.size(); ++i)
      if (support[j][i]) keep.push_back(dom[i]);
    if (keep.size() != dom.size()) updates.emplace_back(units[j], std::move(keep));
  }
  {
    const auto& dom = domain(last);
    std::vector<uint64_t> keep;
    for (size_t i = 0; i < dom.size(); ++i)
      if (wanted.count(last_hashes[i])) keep.push_back(dom[i]);
    if (keep.size() != dom.size() || !has_candidates_[last]) updates.emplace_back(last, std::move(keep));
  }
  if (eq.unknown.size() == 1) eq.done = true;  // fully absorbed into the domain
  for (auto& [u, keep] : updates) restrict(u, std::move(keep));
}

void StaticDecoder::drain() {
  while (!worklist_.empty()) {
    const int u = worklist_.back();
    worklist_.pop_back();
    const std::vector<int> eqs = waiting_[u];
    for (int idx : eqs) evaluate(idx);
    if (known_[u]) waiting_[u].clear();
  }
}

void StaticDecoder::add(const CodedObservation& obs) {
  ++observations_;
  const ObservationInfo info = describe_observation(obs, k_, scheme_, seed_);
  Equation eq{obs.packet_id, obs.instance, obs.digest & low_mask(scheme_.digest_bits), {}};
  for (int hop : info.modifiers) eq.unknown.push_back(unit_of(hop, info.fragment));
  const int idx = static_cast<int>(equations_.size());
  equations_.push_back(std::move(eq));
  for (int u : equations_.back().unknown)
    if (!known_[u]) waiting_[u].push_back(idx);
  evaluate(idx);
  drain();
}

int StaticDecoder::decoded_hops() const {
  int n = 0;
  for (int h = 1; h <= k_; ++h) {
    bool all = true;
    for (int f = 1; f <= fragments_; ++f) all = all && known_[unit_of(h, f)];
    n += all ? 1 : 0;
  }
  return n;
}

HopResult StaticDecoder::hop(int i) const {
  if (i < 1 || i > k_) throw std::out_of_range("StaticDecoder::hop: index out of range");
  HopResult r;
  r.decoded = true;
  for (int f = 1; f <= fragments_; ++f) {
    const int u = unit_of(i, f);
    r.contradiction = r.contradiction || unit_contradiction_[u];
    if (!known_[u]) {
      r.decoded = false;
      continue;
    }
    const int shift = (f - 1) * scheme_.digest_bits;
    if (scheme_.mode == BlockMode::kRaw) {
      if (shift < 64) r.value |= value_[u] << shift;
    } else {
      r.value = value_[u];
    }
  }
  if (!r.decoded) r.value = 0;
  if (scheme_.mode == BlockMode::kHashed) {
    const int u = unit_of(i, 1);
    r.candidates = has_candidates_[u] ? candidates_[u] : std::vector<uint64_t>{};
    if (known_[u] && r.candidates.empty()) r.candidates = {value_[u]};
  }
  return r;
}

std::vector<HopResult> StaticDecoder::results() const {
  std::vector<HopResult> out;
  out.reserve(k_);
  for (int i = 1; i <= k_; ++i) out.push_back(hop(i));
  return out;
}

std::optional<std::vector<uint64_t>> StaticDecoder::values() const {
  if (!complete()) return std::nullopt;
  std::vector<uint64_t> out;
  for (int i = 1; i <= k_; ++i) out.push_back(hop(i).value);
  return out;
}

std::vector<HopResult> decode_static(std::span<const CodedObservation> observations, int k,
                                     std::span<const uint64_t> candidates,
                                     const StaticScheme& scheme, HashSeed seed) {
  StaticDecoder dec(k, scheme, seed, std::vector<uint64_t>(candidates.begin(), candidates.end()));
  for (const auto& o : observations) dec.add(o);
  return dec.results();
}

bool detect_path_change(std::span<const uint64_t> known_path, const CodedObservation& obs,
                        const StaticScheme& scheme, HashSeed seed) {
  const int k = static_cast<int>(known_path.size());
  const ObservationInfo info = describe_observation(obs, k, scheme, seed);
  seed.instance = obs.instance;
  uint64_t expected = 0;
  for (int hop : info.modifiers)
    expected ^= block_contribution(known_path[hop - 1], obs.packet_id, scheme, seed);
  return expected != (obs.digest & low_mask(scheme.digest_bits));
}

void write_observations(std::ostream& out, std::span<const CodedObservation> observations) {
  for (const auto& o : observations)
    out << o.packet_id << ' ' << o.instance << ' ' << std::hex << o.digest << std::dec << '\n';
}

namespace {

bool skip_line(const std::string& line) {
  const auto pos = line.find_first_not_of(" \t\r");
  return pos == std::string::npos || line[pos] == '#';
}

}  // namespace

std::vector<CodedObservation> read_observations(std::istream& in) {
  std::vector<CodedObservation> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (skip_line(line)) continue;
    std::istringstream ss(line);
    CodedObservation o;
    std::string hex;
    if (!(ss >> o.packet_id >> o.instance >> hex))
      throw std::runtime_error("observations: malformed record at line " + std::to_string(lineno));
    try {
      size_t used = 0;
      o.digest = std::stoull(hex, &used, 16);
      if (used != hex.size()) throw std::invalid_argument(hex);
    } catch (const std::exception&) {
      throw std::runtime_error("observations: bad digest at line " + std::to_string(lineno));
    }
    out.push_back(o);
  }
  return out;
}

std::vector<uint64_t> read_candidates(std::istream& in) {
  std::vector<uint64_t> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    if (skip_line(line)) continue;
    std::istringstream ss(line);
    std::string tok;
    ss >> tok;
    try {
      size_t used = 0;
      out.push_back(std::stoull(tok, &used, 0));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw std::runtime_error("candidates: bad value at line " + std::to_string(lineno));
    }
  }
  return out;
}

}  // namespace pint
