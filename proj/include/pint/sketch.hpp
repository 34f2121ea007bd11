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

#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

namespace pint {

/// Mergeable quantile sketch with KLL-style compaction. `k` is the size of
/// the lowest compactor; higher levels shrink geometrically by 2/3, so the
/// retained item count stays below about 3k.
class KllSketch {
 public:
  explicit KllSketch(int k = 100, uint64_t seed = 0);

  void insert(double value);
  void merge(const KllSketch& other);

  uint64_t count() const { return n_; }
  bool empty() const { return n_ == 0; }
  int k() const { return k_; }
  size_t retained() const;

  /// An element whose rank is close to floor(phi * n); nullopt when empty.
  std::optional<double> quantile(double phi) const;
  /// Estimated fraction of inserted items strictly below `value`.
  double rank(double value) const;

 private:
  size_t capacity(size_t level) const;
  void compress();
  void compact(size_t level);
  bool coin();

  int k_;
  uint64_t n_ = 0;
  uint64_t rng_;
  std::vector<std::vector<double>> levels_;
};

/// Space-Saving heavy-hitter summary. Estimates overcount by at most n/capacity.
class SpaceSaving {
 public:
  explicit SpaceSaving(size_t capacity);
  /// Capacity that keeps the overcount at or below eps * n.
  static SpaceSaving for_error(double eps);

  void insert(uint64_t item, uint64_t weight = 1);
  uint64_t count() const { return n_; }
  size_t capacity() const { return capacity_; }
  size_t size() const { return counters_.size(); }

  uint64_t estimate(uint64_t item) const;
  /// (item, estimated count) pairs with estimate >= threshold, highest first.
  std::vector<std::pair<uint64_t, uint64_t>> above(double threshold) const;

 private:
  struct Counter {
    uint64_t count = 0;
    uint64_t error = 0;
  };
  size_t capacity_;
  uint64_t n_ = 0;
  std::unordered_map<uint64_t, Counter> counters_;
};

/// Items reported as theta-heavy hitters when the summary was fed a uniform
/// subsample and the total error budget is eps: half goes to sampling, half
/// to the summary, so the report threshold sits at theta - eps/4.
std::vector<uint64_t> heavy_hitters(const SpaceSaving& summary, double theta, double eps);

/// Quantiles over the most recent `window` insertions, kept exactly.
class WindowedQuantiles {
 public:
  explicit WindowedQuantiles(size_t window);
  void insert(double value);
  size_t size() const { return values_.size(); }
  std::optional<double> quantile(double phi) const;

 private:
  size_t window_;
  std::deque<double> values_;
};

}  // namespace pint
