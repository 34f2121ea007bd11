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
#include <string>
#include <utility>
#include <vector>

namespace pint {

struct LinkParams {
  double B_bytes_per_sec = 100e9 / 8.0;
  double T_seconds = 13e-6;
};

/// Switch universe plus named single paths (one path per flow).
struct Topology {
  std::vector<uint64_t> switches;
  std::vector<std::pair<std::string, std::vector<uint64_t>>> paths;
  LinkParams link;

  const std::vector<uint64_t>& path(const std::string& name) const;
  size_t max_path_length() const;
};

/// Text format:
///
///   # comment
///   switches: 1 2 3 ...        (may continue over several lines)
///   link: <bytes/sec> <seconds> (optional)
///   paths:
///     name: 1 2 3
///
/// Errors carry `source:line`.
Topology parse_topology(std::istream& in, const std::string& source = "<input>");
Topology load_topology(const std::string& file);
void write_topology(std::ostream& out, const Topology& topo);

/// Switch ids 1..V plus one path named "main" of k distinct ids drawn from
/// them with the given seed.
Topology linear_topology(int k, int V, uint64_t seed = 1);

/// 753 switches with a set of paths whose longest has 59 hops.
Topology kentucky_like_topology(uint64_t seed = 1);

}  // namespace pint
