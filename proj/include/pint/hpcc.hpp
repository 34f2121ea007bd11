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

#include "pint/approx.hpp"
#include "pint/fixed_point.hpp"
#include "pint/hashing.hpp"

namespace pint {

/// Link parameters for the utilization EWMA. Defaults model a 100 Gbps link
/// with a 13 us base RTT.
struct HpccConfig {
  double T_seconds = 13e-6;
  double B_bytes_per_sec = 100e9 / 8.0;
  int q = 8;
  double epsilon = 0.025;
};

/// Reference state in real arithmetic.
struct LinkState {
  double U = 0.0;
  double B = 100e9 / 8.0;  // bytes per second
  double T = 13e-6;        // seconds
};

struct PacketDequeueEvent {
  double bytes = 0.0;  // packet size
  double qlen = 0.0;   // queue length at dequeue, bytes
  double tau = 0.0;    // time since the previous dequeue on the link, seconds
};

/// U' = (T - tau)/T U + qlen tau / (B T^2) + byte / (B T).
double util_update_exact(const LinkState& state, const PacketDequeueEvent& ev);

/// Fixed point of the exact update under a constant event:
/// U* = qlen / (B T) + byte / (B tau).
double util_fixpoint(const LinkState& state, const PacketDequeueEvent& ev);

/// Switch-side state. Times are integer nanoseconds, the bandwidth is bytes
/// per nanosecond with 16 fractional bits, and U has 32 fractional bits.
struct SwitchLinkState {
  uint64_t U_fix = 0;
  uint64_t T_ns = 13000;
  uint64_t B_fix = 819200;  // 12.5 bytes/ns

  static constexpr int kUFracBits = 32;
  static constexpr int kBFracBits = 16;

  static SwitchLinkState from(const LinkState& s);
  double U() const;
  double B_bytes_per_sec() const;
  double T_seconds() const;
};

struct SwitchDequeueEvent {
  uint64_t bytes = 0;
  uint64_t qlen = 0;
  uint64_t tau_ns = 0;
};

struct SwitchUpdate {
  uint64_t U_fix = 0;
  bool overflow = false;
};

/// The same update computed as 2^U_term + 2^qlen_term + 2^byte_term, where
///   U_term    = log T-tau - log T + log U
///   qlen_term = log qlen + log tau - log B - 2 log T
///   byte_term = log byte - log B - log T
/// Every log and exp goes through the lookup tables; a term whose operand is
/// zero contributes nothing.
SwitchUpdate util_update_switch(const SwitchLinkState& state, const SwitchDequeueEvent& ev,
                                const LogLookup& lut);

/// Real-valued view of a switch event, for comparing against the oracle.
PacketDequeueEvent to_exact(const SwitchDequeueEvent& ev);

/// Codec for the utilization digest: 8-bit indices with eps = 0.025 over [2^-10, 2^6].
MultCodec util_codec(double eps = 0.025, int bits = 8);

MultCodec::Encoded encode_util(double U, uint64_t packet_id, HashSeed seed,
                               const MultCodec& codec = util_codec());
double decode_util(uint64_t index, const MultCodec& codec = util_codec());

}  // namespace pint
