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

#include "pint/topology.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace pint {

const std::vector<uint64_t>& Topology::path(const std::string& name) const {
  for (const auto& [n, p] : paths)
    if (n == name) return p;
  throw std::out_of_range("topology has no path named '" + name + "'");
}

size_t Topology::max_path_length() const {
  size_t m = 0;
  for (const auto& [n, p] : paths) m = std::max(m, p.size());
  return m;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(const std::string& source, int line, const std::string& msg) {
  throw std::runtime_error(source + ":" + std::to_string(line) + ": " + msg);
}

std::vector<uint64_t> parse_ids(const std::string& text, const std::string& source, int line) {
  std::vector<uint64_t> ids;
  std::istringstream ss(text);
  std::string tok;
  while (ss >> tok) {
    try {
      size_t used = 0;
      ids.push_back(std::stoull(tok, &used, 0));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      fail(source, line, "bad switch id '" + tok + "'");
    }
  }
  return ids;
}

}  // namespace

Topology parse_topology(std::istream& in, const std::string& source) {
  Topology t;
  enum class Section { kNone, kSwitches, kPaths } section = Section::kNone;
  std::unordered_set<uint64_t> known;
  std::vector<std::pair<int, size_t>> path_lines;  // (line, path index) for later checks
  std::unordered_set<std::string> names;
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    const auto colon = line.find(':');
    const std::string head = colon == std::string::npos ? "" : trim(line.substr(0, colon));
    const std::string rest = colon == std::string::npos ? line : trim(line.substr(colon + 1));
    if (head == "switches") {
      section = Section::kSwitches;
    } else if (head == "paths") {
      section = Section::kPaths;
      if (!rest.empty()) fail(source, lineno, "'paths:' takes no values on its own line");
      continue;
    } else if (head == "link") {
      std::istringstream ss(rest);
      if (!(ss >> t.link.B_bytes_per_sec >> t.link.T_seconds) || t.link.B_bytes_per_sec <= 0 ||
          t.link.T_seconds <= 0)
        fail(source, lineno, "link expects '<bytes/sec> <seconds>' with positive values");
      continue;
    } else if (section == Section::kPaths) {
      if (colon == std::string::npos || head.empty()) fail(source, lineno, "expected 'name: ids...'");
      if (!names.insert(head).second) fail(source, lineno, "duplicate path name '" + head + "'");
      auto ids = parse_ids(rest, source, lineno);
      if (ids.empty()) fail(source, lineno, "path '" + head + "' is empty");
      path_lines.emplace_back(lineno, t.paths.size());
      t.paths.emplace_back(head, std::move(ids));
      continue;
    } else if (section != Section::kSwitches || colon != std::string::npos) {
      fail(source, lineno, "unexpected line '" + line + "'");
    }
    for (uint64_t id : parse_ids(rest, source, lineno)) {
      if (!known.insert(id).second) fail(source, lineno, "duplicate switch id " + std::to_string(id));
      t.switches.push_back(id);
    }
  }
  for (const auto& [line, idx] : path_lines) {
    const auto& [name, ids] = t.paths[idx];
    std::unordered_set<uint64_t> seen;
    for (uint64_t id : ids) {
      if (!known.count(id))
        fail(source, line, "path '" + name + "' references unknown switch " + std::to_string(id));
      if (!seen.insert(id).second)
        fail(source, line, "path '" + name + "' visits switch " + std::to_string(id) + " twice");
    }
  }
  return t;
}

Topology load_topology(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open topology file '" + file + "'");
  return parse_topology(in, file);
}

void write_topology(std::ostream& out, const Topology& t) {
  out << "switches:";
  for (size_t i = 0; i < t.switches.size(); ++i) {
    if (i > 0 && i % 20 == 0) out << "\n ";
    out << ' ' << t.switches[i];
  }
  out << "\nlink: " << t.link.B_bytes_per_sec << ' ' << t.link.T_seconds << "\npaths:\n";
  for (const auto& [name, ids] : t.paths) {
    out << "  " << name << ':';
    for (uint64_t id : ids) out << ' ' << id;
    out << '\n';
  }
}

Topology linear_topology(int k, int V, uint64_t seed) {
  if (k < 1 || V < k) throw std::invalid_argument("linear_topology: need 1 <= k <= V");
  Topology t;
  for (int i = 1; i <= V; ++i) t.switches.push_back(static_cast<uint64_t>(i));
  std::vector<uint64_t> pool = t.switches;
  std::mt19937_64 rng(seed);
  std::shuffle(pool.begin(), pool.end(), rng);
  pool.resize(static_cast<size_t>(k));
  t.paths.emplace_back("main", std::move(pool));
  return t;
}

Topology kentucky_like_topology(uint64_t seed) {
  constexpr int kSwitches = 753;
  Topology t;
  for (int i = 1; i <= kSwitches; ++i) t.switches.push_back(static_cast<uint64_t>(i));
  std::mt19937_64 rng(seed);
  for (int len : {59, 48, 36, 25, 17, 10, 5}) {
    std::vector<uint64_t> pool = t.switches;
    std::shuffle(pool.begin(), pool.end(), rng);
    pool.resize(static_cast<size_t>(len));
    t.paths.emplace_back("p" + std::to_string(len), std::move(pool));
  }
  return t;
}

}  // namespace pint
