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

#include "pint/dynamic_agg.hpp"

#include <ostream>
#include <stdexcept>

namespace pint {

uint64_t reservoir_encode(uint64_t digest, uint64_t packet_id, int hop, uint64_t value,
                          HashSeed seed) {
  return hop_hash(packet_id, hop, seed).at_most(1.0 / hop) ? value : digest;
}

int attribute_hop(uint64_t packet_id, int k, HashSeed seed) {
  if (k < 1) throw std::invalid_argument("attribute_hop: k must be >= 1");
  for (int i = k; i > 1; --i)
    if (hop_hash(packet_id, i, seed).at_most(1.0 / i)) return i;
  return 1;
}

FlowHopRecorder::FlowHopRecorder(int k, RecorderConfig cfg) : k_(k), cfg_(cfg) {
  if (k < 1) throw std::invalid_argument("FlowHopRecorder: k must be >= 1");
  for (int i = 0; i < k; ++i) {
    sketches_.emplace_back(cfg.sketch_k, mix64(cfg.seed + static_cast<uint64_t>(i)));
    hitters_.push_back(SpaceSaving::for_error(cfg.hh_epsilon / 2.0));
  }
}

void FlowHopRecorder::add(int hop, double value, uint64_t code) {
  if (hop < 1 || hop > k_) throw std::out_of_range("FlowHopRecorder::add: hop out of range");
  sketches_[hop - 1].insert(value);
  hitters_[hop - 1].insert(code);
}

void FlowHopRecorder::add(uint64_t packet_id, uint64_t digest, HashSeed seed, double decoded_value) {
  add(attribute_hop(packet_id, k_, seed), decoded_value, digest);
}

uint64_t FlowHopRecorder::samples(int hop) const { return sketches_.at(hop - 1).count(); }

std::optional<double> FlowHopRecorder::quantile(int hop, double phi) const {
  return sketches_.at(hop - 1).quantile(phi);
}

std::vector<uint64_t> FlowHopRecorder::heavy_hitters(int hop, double theta, double eps) const {
  return pint::heavy_hitters(hitters_.at(hop - 1), theta, eps);
}

DynamicStore::DynamicStore(RecorderConfig cfg) : cfg_(cfg) {}

FlowHopRecorder& DynamicStore::flow(const std::string& key, int k) {
  auto it = flows_.find(key);
  if (it == flows_.end()) it = flows_.emplace(key, FlowHopRecorder(k, cfg_)).first;
  return it->second;
}

const FlowHopRecorder* DynamicStore::find(const std::string& key) const {
  auto it = flows_.find(key);
  return it == flows_.end() ? nullptr : &it->second;
}

void DynamicStore::export_csv(std::ostream& out) const {
  static constexpr double kPhis[] = {0.25, 0.5, 0.75, 0.99};
  out << "flow,hop,n,q0.25,q0.5,q0.75,q0.99\n";
  for (const auto& [key, rec] : flows_) {
    for (int h = 1; h <= rec.path_length(); ++h) {
      out << key << ',' << h << ',' << rec.samples(h);
      for (double phi : kPhis) {
        out << ',';
        if (auto q = rec.quantile(h, phi)) out << *q;
      }
      out << '\n';
    }
  }
}

}  // namespace pint
