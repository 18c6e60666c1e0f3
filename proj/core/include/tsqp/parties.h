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
 * Alice, Bob and KDC state machines and the four-hop session driver.
 *
 * Payload qubits follow the authenticated message lines:
 *
 *   hop 1  A -> B    U_A(X)
 *   hop 2  B -> KDC  U_B U_A(X)
 *   hop 3  KDC -> A  U_B U_A(X)          (forwarded, never measured)
 *   hop 4  A -> B    U_A^dagger U_B U_A(X) = U_B(X)
 *
 * Bob finally removes U_B and decodes X.
 */

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tsqp/auth.h"
#include "tsqp/channel.h"
#include "tsqp/clock.h"
#include "tsqp/encoding.h"
#include "tsqp/transforms.h"

namespace tsqp {

inline constexpr std::uint64_t kDefaultWindowMs = 5000;
/// Simulated epoch at which every network's clock starts.
inline constexpr Timestamp kEpochMs = 1'700'000'000'000ULL;

struct SessionConfig {
  /// The message X. Must be non-empty.
  BitString payload;
  RedundancyFactor payload_redundancy{kDefaultPayloadRedundancy};
  RedundancyFactor auth_redundancy{kDefaultAuthRedundancy};
  KeyPolicy key_policy;
  std::uint64_t window_ms = kDefaultWindowMs;
  std::uint64_t seed = 0;
  /// False runs the bare three-pass exchange with empty auth segments. It has
  /// no identity binding and is insecure against impersonation.
  bool authenticate = true;
  /// Fixed keys instead of generated ones.
  std::optional<SeparableTransform> alice_key;
  std::optional<SeparableTransform> bob_key;

  /// Payload qubit count n = r * |X|.
  std::size_t qubit_count() const noexcept {
    return payload.size() * payload_redundancy.value();
  }
};

/// Throws std::invalid_argument if the config cannot run.
void Validate(const SessionConfig& cfg);

struct NetworkConfig {
  std::uint64_t seed = 0;
  std::int64_t alice_skew_ms = 0;
  std::int64_t bob_skew_ms = 0;
  std::int64_t kdc_skew_ms = 0;
};

/// Identifiers every principal and the adversary may know.
struct PublicDirectory {
  PartyId alice;
  PartyId bob;
  PartyId kdc;
};

/// Long-lived principals shared by the sessions of one run: identities,
/// master keys, clocks, nonce sources and Bob's replay cache.
class Network {
 public:
  explicit Network(const NetworkConfig& cfg);
  Network(const Network&) = delete;
  Network& operator=(const Network&) = delete;

  SimulatedTime& time() noexcept { return time_; }
  const PublicDirectory& directory() const noexcept { return directory_; }

 private:
  friend class AliceMachine;
  friend class BobMachine;
  friend class KdcMachine;

  SimulatedTime time_;
  PublicDirectory directory_;
  MasterKey alice_key_;
  MasterKey bob_key_;
  KeyTable kdc_table_;
  LocalClock alice_clock_;
  LocalClock bob_clock_;
  LocalClock kdc_clock_;
  NonceSource alice_nonces_;
  NonceSource bob_nonces_;
  ReplayCache bob_replay_cache_;
};

enum class Phase {
  kIdle,
  kAwaitingMsg1,
  kAwaitingMsg2,
  kAwaitingMsg3,
  kAwaitingMsg4,
  kDone,
  kAborted,
};

std::string_view ToString(Phase phase) noexcept;

class AliceMachine {
 public:
  AliceMachine(Network& net, const SessionConfig& cfg, SeparableTransform key,
               std::uint64_t seed);

  /// Hop 1: Q(ID_A || N_a) || U_A(X).
  QubitFrame Start();
  /// Hop 4: validates msg3 and strips U_A from the payload.
  /// Throws ProtocolAbort.
  QubitFrame OnMsg3(const QubitFrame& frame);

  Phase phase() const noexcept { return phase_; }
  Timestamp LocalTime() const { return net_->alice_clock_.Now(); }

 private:
  Network* net_;
  SessionConfig cfg_;
  SeparableTransform key_;
  Rng rng_;
  Phase phase_ = Phase::kIdle;
  Nonce n_a_;
};

class BobMachine {
 public:
  BobMachine(Network& net, const SessionConfig& cfg, SeparableTransform key,
             std::uint64_t seed);

  /// Hop 2: applies U_B and asks the KDC for a session key.
  /// Throws ProtocolAbort.
  QubitFrame OnMsg1(const QubitFrame& frame);
  /// Validates msg4, strips U_B and decodes X. Throws ProtocolAbort.
  BitString OnMsg4(const QubitFrame& frame);

  Phase phase() const noexcept { return phase_; }
  Timestamp LocalTime() const { return net_->bob_clock_.Now(); }
  /// T_b stamped into this session's ticket request.
  Timestamp ticket_time() const noexcept { return t_b_; }
  const std::optional<SessionKey>& session_key() const noexcept { return k_s_; }

 private:
  Network* net_;
  SessionConfig cfg_;
  SeparableTransform key_;
  Rng rng_;
  Phase phase_ = Phase::kAwaitingMsg1;
  PartyId peer_;
  Nonce n_b_;
  Timestamp t_b_ = 0;
  std::optional<SessionKey> k_s_;
};

/// Stateless apart from its phase; the KDC handles one request per session.
class KdcMachine {
 public:
  KdcMachine(Network& net, const SessionConfig& cfg, std::uint64_t seed);

  /// Hop 3: issues K_s and forwards the payload qubits untouched.
  /// Throws ProtocolAbort.
  QubitFrame OnMsg2(const QubitFrame& frame);

  Phase phase() const noexcept { return phase_; }
  Timestamp LocalTime() const { return net_->kdc_clock_.Now(); }

 private:
  Network* net_;
  SessionConfig cfg_;
  Rng rng_;
  Phase phase_ = Phase::kAwaitingMsg2;
};

/// One hop of a session as the driver observed it.
struct HopRecord {
  int hop = 0;
  Role from = Role::kAlice;
  Role to = Role::kBob;
  /// Sender's local clock when the frame left.
  Timestamp sender_clock_ms = 0;
  Timestamp sent_at_ms = 0;
  Timestamp delivered_at_ms = 0;
  /// Auth bits decoded from the delivered frame, if its header was readable.
  std::optional<BitString> auth_bits;
  std::size_t payload_qubits = 0;
  /// Amplitude snapshots, when the session captures them.
  std::optional<std::vector<QubitState>> payload_sent;
  std::optional<std::vector<QubitState>> payload_delivered;
  std::optional<BitString> eve_payload_bits;
  bool substituted = false;
};

struct Recovered {
  BitString bits;
};

struct Aborted {
  AbortReason reason = AbortReason::kBadFrame;
  /// Hop whose processing failed; 0 for a pre-flight rejection.
  int step = 0;
  Role at = Role::kAlice;
  std::string detail;
};

struct SessionResult {
  std::variant<Recovered, Aborted> outcome;
  /// Payload error statistics against X, when Bob recovered something.
  std::optional<QberReport> qber;
  std::vector<HopRecord> hops;

  bool recovered() const noexcept {
    return std::holds_alternative<Recovered>(outcome);
  }
  const Aborted* aborted() const noexcept {
    return std::get_if<Aborted>(&outcome);
  }
};

struct RunOptions {
  bool capture_amplitudes = false;
};

/// Drives hops 1-4 through the channel on an existing network. Keys are
/// generated (or taken from cfg) and, under MixedValidated, checked for
/// commutation before hop 1.
SessionResult RunSession(const SessionConfig& cfg, Channel& channel,
                         Network& net, RunOptions options = {});

/// Convenience overload: a fresh network seeded from cfg.seed and a channel
/// built from channel_cfg.
SessionResult RunSession(const SessionConfig& cfg,
                         const ChannelConfig& channel_cfg,
                         RunOptions options = {});

/// Majority-decodes a frame's auth segment without disturbing anything but
/// basis states; nullopt when the header or lengths do not decode.
std::optional<BitString> PeekAuthBits(const QubitFrame& frame);

}  // namespace tsqp
