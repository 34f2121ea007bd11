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

#include "pint/hpcc.hpp"

#include <cmath>
#include <stdexcept>

namespace pint {

double util_update_exact(const LinkState& s, const PacketDequeueEvent& ev) {
  if (!(s.B > 0.0 && s.T > 0.0)) throw std::invalid_argument("util_update_exact: need B, T > 0");
  return (s.T - ev.tau) / s.T * s.U + ev.qlen * ev.tau / (s.B * s.T * s.T) + ev.bytes / (s.B * s.T);
}

double util_fixpoint(const LinkState& s, const PacketDequeueEvent& ev) {
  if (!(ev.tau > 0.0)) throw std::invalid_argument("util_fixpoint: tau must be > 0");
  return ev.qlen / (s.B * s.T) + ev.bytes / (s.B * ev.tau);
}

SwitchLinkState SwitchLinkState::from(const LinkState& s) {
  SwitchLinkState w;
  w.T_ns = static_cast<uint64_t>(std::llround(s.T * 1e9));
  w.B_fix = static_cast<uint64_t>(std::llround(s.B * 1e-9 * 0x1p16));
  w.U_fix = static_cast<uint64_t>(std::llround(s.U * 0x1p32));
  return w;
}

double SwitchLinkState::U() const { return std::ldexp(static_cast<double>(U_fix), -kUFracBits); }
double SwitchLinkState::B_bytes_per_sec() const {
  return std::ldexp(static_cast<double>(B_fix), -kBFracBits) * 1e9;
}
double SwitchLinkState::T_seconds() const { return static_cast<double>(T_ns) * 1e-9; }

PacketDequeueEvent to_exact(const SwitchDequeueEvent& ev) {
  return PacketDequeueEvent{static_cast<double>(ev.bytes), static_cast<double>(ev.qlen),
                            static_cast<double>(ev.tau_ns) * 1e-9};
}

SwitchUpdate util_update_switch(const SwitchLinkState& s, const SwitchDequeueEvent& ev,
                                const LogLookup& lut) {
  constexpr int64_t kOne = int64_t{1} << kLogFracBits;
  const int64_t log_T = log2_fix(s.T_ns, lut);
  const int64_t log_B = log2_fix(s.B_fix, lut) - SwitchLinkState::kBFracBits * kOne;
  const uint64_t tau = ev.tau_ns < s.T_ns ? ev.tau_ns : s.T_ns;

  SwitchUpdate out;
  auto accumulate = [&](int64_t term) {
    const Exp2Result r = exp2_fix(term, lut, SwitchLinkState::kUFracBits);
    out.overflow = out.overflow || r.overflow || out.U_fix + r.value < out.U_fix;
    out.U_fix += r.value;
  };
  if (s.U_fix != 0 && tau < s.T_ns) {
    const int64_t log_U = log2_fix(s.U_fix, lut) - SwitchLinkState::kUFracBits * kOne;
    accumulate(log2_fix(s.T_ns - tau, lut) - log_T + log_U);
  }
  if (ev.qlen != 0 && tau != 0)
    accumulate(log2_fix(ev.qlen, lut) + log2_fix(tau, lut) - log_B - log_T - log_T);
  if (ev.bytes != 0) accumulate(log2_fix(ev.bytes, lut) - log_B - log_T);
  return out;
}

MultCodec util_codec(double eps, int bits) {
  MultCodec c;
  c.eps = eps;
  c.bits = bits;
  c.validate();
  return c;
}

MultCodec::Encoded encode_util(double U, uint64_t packet_id, HashSeed seed, const MultCodec& codec) {
  return codec.encode_randomized(U, packet_id, seed);
}

double decode_util(uint64_t index, const MultCodec& codec) { return codec.decode(index); }

}  // namespace pint
