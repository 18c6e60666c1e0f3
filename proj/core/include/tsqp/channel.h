// Copyright 2026 The tsqp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

/**
 * @file
 * The transmission medium between principals.
 *
 * A Channel sees frames and nothing else: no master keys, session keys or
 * party transforms ever cross this interface. Adversaries are modelled as
 * channel behaviours (intercept-resend, suppress-replay, replay of a
 * recorded frame) plus the impersonation harness in attacks.h.
 */

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "tsqp/clock.h"
#include "tsqp/encoding.h"
#include "tsqp/rng.h"

namespace tsqp {

enum class Role { kAlice, kBob, kKdc, kEve };

std::string_view ToString(Role role) noexcept;

enum class AdversaryKind {
  kNone,
  /// Measures payload qubits in the computational basis and forwards the
  /// collapsed states.
  kInterceptResend,
  /// Impersonates each endpoint to the other. Driven by MitmAttack; a plain
  /// Channel treats it as kNone.
  kMitm,
  /// Substitutes a frame recorded from an earlier session.
  kReplay,
  /// Withholds a frame for a while before delivering it.
  kSuppressReplay,
};

std::string_view ToString(AdversaryKind kind) noexcept;

inline constexpr std::uint64_t kHopLatencyMs = 5;

struct ChannelConfig {
  AdversaryKind adversary = AdversaryKind::kNone;
  /// Independent per-qubit Pauli-X probability, all segments.
  double flip_noise_p = 0.0;
  std::uint64_t seed = 0;
  /// Hop attacked by intercept-resend, replay and suppress-replay.
  int target_hop = 1;
  /// Extra simulated delay for suppress-replay.
  std::uint64_t delay_ms = 0;
};

/// Throws std::invalid_argument if the probability is outside [0, 1] or the
/// target hop is outside [1, 4].
void Validate(const ChannelConfig& cfg);

struct Envelope {
  int hop = 0;
  Role from = Role::kAlice;
  Role to = Role::kBob;
  QubitFrame frame;
};

/// What crossed the channel on one hop, as the adversary saw it.
struct TapEntry {
  int hop = 0;
  Role from = Role::kAlice;
  Role to = Role::kBob;
  Timestamp sent_at_ms = 0;
  Timestamp delivered_at_ms = 0;
  QubitFrame delivered;
  /// Bits the eavesdropper read from the payload (intercept-resend only).
  std::optional<BitString> eve_payload_bits;
  bool substituted = false;
};

class TapLog {
 public:
  void Record(TapEntry entry) { entries_.push_back(std::move(entry)); }
  const std::vector<TapEntry>& entries() const noexcept { return entries_; }
  /// Last frame recorded on the given hop, if any.
  const TapEntry* FindHop(int hop) const noexcept;
  void Clear() noexcept { entries_.clear(); }

 private:
  std::vector<TapEntry> entries_;
};

/// Measures every payload qubit and replaces it with the collapsed state.
/// Header and auth segments pass through untouched. Returns the attacked
/// frame and the bits Eve read.
struct InterceptResult {
  QubitFrame frame;
  BitString observed;
};
InterceptResult InterceptResend(const QubitFrame& frame, Rng& rng);

/// Applies Pauli-X to each qubit of every segment with probability p.
QubitFrame ApplyFlipNoise(const QubitFrame& frame, double p, Rng& rng);

struct QberReport {
  std::size_t compared = 0;
  std::size_t mismatches = 0;
  double rate = 0.0;
};

/// Throws std::invalid_argument on a length mismatch.
QberReport EstimateQber(const BitString& sent, const BitString& received);

class Channel {
 public:
  /// `recording` supplies the frames a kReplay channel injects; it must
  /// outlive the channel.
  Channel(ChannelConfig cfg, SimulatedTime& time,
          const TapLog* recording = nullptr);

  /// Delivers one frame: noise first, then the adversary. Advances simulated
  /// time by the hop latency plus any adversarial delay.
  Envelope Transmit(Envelope sent);

  const ChannelConfig& config() const noexcept { return cfg_; }
  const TapLog& tap() const noexcept { return tap_; }
  /// Gives the log of this channel to the caller and starts a fresh one.
  TapLog TakeTap() noexcept;

 private:
  ChannelConfig cfg_;
  SimulatedTime* time_;
  const TapLog* recording_;
  Rng rng_;
  TapLog tap_;
};

}  // namespace tsqp
