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

#include "pint/sketch.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pint/hashing.hpp"

namespace pint {

KllSketch::KllSketch(int k, uint64_t seed) : k_(k), rng_(mix64(seed ^ 0x4b4c4cULL)) {
  if (k < 2) throw std::invalid_argument("KllSketch: k must be >= 2");
  levels_.emplace_back();
}

size_t KllSketch::capacity(size_t level) const {
  const size_t depth = levels_.size() - level - 1;
  const double c = std::ceil(k_ * std::pow(2.0 / 3.0, static_cast<double>(depth)));
  return std::max<size_t>(2, static_cast<size_t>(c));
}

size_t KllSketch::retained() const {
  size_t s = 0;
  for (const auto& l : levels_) s += l.size();
  return s;
}

bool KllSketch::coin() {
  rng_ = mix64(rng_ + 0x9e3779b97f4a7c15ULL);
  return rng_ & 1U;
}

void KllSketch::compact(size_t level) {
  if (level + 1 == levels_.size()) levels_.emplace_back();
  auto& cur = levels_[level];
  std::sort(cur.begin(), cur.end());
  // An odd leftover stays behind so the promoted half has even size.
  std::optional<double> keep;
  if (cur.size() % 2 == 1) {
    keep = cur.back();
    cur.pop_back();
  }
  const size_t offset = coin() ? 1 : 0;
  auto& next = levels_[level + 1];
  for (size_t i = offset; i < cur.size(); i += 2) next.push_back(cur[i]);
  cur.clear();
  if (keep) cur.push_back(*keep);
}

void KllSketch::compress() {
  for (size_t level = 0; level < levels_.size(); ++level) {
    if (levels_[level].size() >= capacity(level) + 1) {
      compact(level);
    }
  }
}

void KllSketch::insert(double value) {
  levels_[0].push_back(value);
  ++n_;
  if (levels_[0].size() > capacity(0)) compress();
}

void KllSketch::merge(const KllSketch& other) {
  while (levels_.size() < other.levels_.size()) levels_.emplace_back();
  for (size_t l = 0; l < other.levels_.size(); ++l)
    levels_[l].insert(levels_[l].end(), other.levels_[l].begin(), other.levels_[l].end());
  n_ += other.n_;
  compress();
}

std::optional<double> KllSketch::quantile(double phi) const {
  if (n_ == 0) return std::nullopt;
  if (!(phi >= 0.0 && phi <= 1.0)) throw std::invalid_argument("KllSketch::quantile: phi out of [0,1]");
  std::vector<std::pair<double, uint64_t>> items;
  for (size_t l = 0; l < levels_.size(); ++l)
    for (double v : levels_[l]) items.emplace_back(v, uint64_t{1} << l);
  std::sort(items.begin(), items.end());
  uint64_t total = 0;
  for (const auto& it : items) total += it.second;
  const double target = std::floor(phi * static_cast<double>(total));
  uint64_t cum = 0;
  for (const auto& [v, w] : items) {
    cum += w;
    if (static_cast<double>(cum) > target) return v;
  }
  return items.back().first;
}

double KllSketch::rank(double value) const {
  if (n_ == 0) return 0.0;
  uint64_t below = 0, total = 0;
  for (size_t l = 0; l < levels_.size(); ++l)
    for (double v : levels_[l]) {
      total += uint64_t{1} << l;
      if (v < value) below += uint64_t{1} << l;
    }
  return static_cast<double>(below) / static_cast<double>(total);
}

// ---------------------------------------------------------------------------

SpaceSaving::SpaceSaving(size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw std::invalid_argument("SpaceSaving: capacity must be >= 1");
  counters_.reserve(capacity * 2);
}

SpaceSaving SpaceSaving::for_error(double eps) {
  if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("SpaceSaving: eps must be in (0,1]");
  return SpaceSaving(static_cast<size_t>(std::ceil(1.0 / eps)));
}

void SpaceSaving::insert(uint64_t item, uint64_t weight) {
  n_ += weight;
  if (auto it = counters_.find(item); it != counters_.end()) {
    it->second.count += weight;
    return;
  }
  if (counters_.size() < capacity_) {
    counters_.emplace(item, Counter{weight, 0});
    return;
  }
  auto victim = std::min_element(counters_.begin(), counters_.end(), [](const auto& a, const auto& b) {
    return a.second.count < b.second.count;
  });
  const uint64_t floor_count = victim->second.count;
  counters_.erase(victim);
  counters_.emplace(item, Counter{floor_count + weight, floor_count});
}

uint64_t SpaceSaving::estimate(uint64_t item) const {
  if (auto it = counters_.find(item); it != counters_.end()) return it->second.count;
  return 0;
}

std::vector<std::pair<uint64_t, uint64_t>> SpaceSaving::above(double threshold) const {
  std::vector<std::pair<uint64_t, uint64_t>> out;
  for (const auto& [item, c] : counters_)
    if (static_cast<double>(c.count) >= threshold) out.emplace_back(item, c.count);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  return out;
}

std::vector<uint64_t> heavy_hitters(const SpaceSaving& summary, double theta, double eps) {
  if (!(eps > 0.0 && eps < theta && theta <= 1.0))
    throw std::invalid_argument("heavy_hitters: need 0 < eps < theta <= 1");
  std::vector<uint64_t> out;
  const double threshold = (theta - eps / 4.0) * static_cast<double>(summary.count());
  for (const auto& [item, c] : summary.above(threshold)) out.push_back(item);
  return out;
}

// ---------------------------------------------------------------------------

WindowedQuantiles::WindowedQuantiles(size_t window) : window_(window) {
  if (window == 0) throw std::invalid_argument("WindowedQuantiles: window must be >= 1");
}

void WindowedQuantiles::insert(double value) {
  values_.push_back(value);
  if (values_.size() > window_) values_.pop_front();
}

std::optional<double> WindowedQuantiles::quantile(double phi) const {
  if (values_.empty()) return std::nullopt;
  std::vector<double> v(values_.begin(), values_.end());
  const size_t idx = std::min(v.size() - 1, static_cast<size_t>(std::floor(phi * v.size())));
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(idx), v.end());
  return v[idx];
}

}  // namespace pint
