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

#include "tsqp/parties.h"

#include <stdexcept>

namespace tsqp {
namespace {

constexpr std::uint64_t kAliceIdNumber = 0x414C494345000000ULL;  // "ALICE"
constexpr std::uint64_t kBobIdNumber = 0x424F420000000000ULL;    // "BOB"
constexpr std::uint64_t kKdcIdNumber = 0x4B44430000000000ULL;    // "KDC"

enum StreamLabel : std::uint64_t {
  kNetworkStream = 0x10,
  kAliceKeyStream,
  kBobKeyStream,
  kAliceStream,
  kBobStream,
  kKdcStream,
  kMasterKeyStream,
  kAliceNonceStream,
  kBobNonceStream,
};

[[noreturn]] void Abort(Phase& phase, AbortReason reason, const std::string& detail) {
  phase = Phase::kAborted;
  throw ProtocolAbort(reason, detail);
}

void ExpectPhase(Phase& phase, Phase expected) {
  if (phase != expected) {
    Abort(phase, AbortReason::kPhaseViolation,
          std::string("message arrived in phase ") + std::string(ToString(phase)));
  }
}

DeframedMessage DeframeOrAbort(Phase& phase, const QubitFrame& frame,
                               std::size_t expected_payload, Rng& rng) {
  try {
    DeframedMessage msg = Deframe(frame, rng);
    if (msg.payload.size() != expected_payload) {
      Abort(phase, AbortReason::kBadFrame,
            "payload carries " + std::to_string(msg.payload.size()) +
                " qubits, expected " + std::to_string(expected_payload));
    }
    return msg;
  } catch (const FramingError& e) {
    Abort(phase, AbortReason::kBadFrame, e.what());
  }
}

// Runs an auth-layer step; any abort moves the machine to kAborted.
template <typename F>
auto Guarded(Phase& phase, F&& step) {
  try {
    return step();
  } catch (const ProtocolAbort&) {
    phase = Phase::kAborted;
    throw;
  }
}

}  // namespace

std::string_view ToString(Phase phase) noexcept {
  switch (phase) {
    case Phase::kIdle: return "Idle";
    case Phase::kAwaitingMsg1: return "AwaitingMsg1";
    case Phase::kAwaitingMsg2: return "AwaitingMsg2";
    case Phase::kAwaitingMsg3: return "AwaitingMsg3";
    case Phase::kAwaitingMsg4: return "AwaitingMsg4";
    case Phase::kDone: return "Done";
    case Phase::kAborted: return "Aborted";
  }
  return "?";
}

void Validate(const SessionConfig& cfg) {
  if (cfg.payload.empty()) throw std::invalid_argument("payload X must not be empty");
  const std::size_t n = cfg.qubit_count();
  if (cfg.alice_key && cfg.alice_key->size() != n) {
    throw std::invalid_argument("Alice's key does not match the payload qubit count");
  }
  if (cfg.bob_key && cfg.bob_key->size() != n) {
    throw std::invalid_argument("Bob's key does not match the payload qubit count");
  }
}

Network::Network(const NetworkConfig& cfg)
    : time_(kEpochMs),
      directory_{PartyId::FromNumber(kAliceIdNumber),
                 PartyId::FromNumber(kBobIdNumber),
                 PartyId::FromNumber(kKdcIdNumber)},
      alice_clock_(time_, cfg.alice_skew_ms),
      bob_clock_(time_, cfg.bob_skew_ms),
      kdc_clock_(time_, cfg.kdc_skew_ms),
      alice_nonces_(DeriveSeed(cfg.seed, {kAliceNonceStream})),
      bob_nonces_(DeriveSeed(cfg.seed, {kBobNonceStream})) {
  Rng rng(DeriveSeed(cfg.seed, {kMasterKeyStream}));
  alice_key_ = MasterKey::Random(rng);
  bob_key_ = MasterKey::Random(rng);
  kdc_table_.Register(directory_.alice, alice_key_);
  kdc_table_.Register(directory_.bob, bob_key_);
}

AliceMachine::AliceMachine(Network& net, const SessionConfig& cfg,
                           SeparableTransform key, std::uint64_t seed)
    : net_(&net), cfg_(cfg), key_(std::move(key)), rng_(seed) {}

QubitFrame AliceMachine::Start() {
  ExpectPhase(phase_, Phase::kIdle);
  BitString auth;
  if (cfg_.authenticate) {
    n_a_ = net_->alice_nonces_.Next();
    auth = BuildMsg1(net_->directory_.alice, n_a_);
  }
  auto payload = ApplySeparable(key_, EncodeQ(cfg_.payload, cfg_.payload_redundancy));
  phase_ = Phase::kAwaitingMsg3;
  return Frame(auth, std::move(payload), cfg_.auth_redundancy);
}

QubitFrame AliceMachine::OnMsg3(const QubitFrame& frame) {
  ExpectPhase(phase_, Phase::kAwaitingMsg3);
  DeframedMessage msg = DeframeOrAbort(phase_, frame, cfg_.qubit_count(), rng_);
  BitString auth;
  if (cfg_.authenticate) {
    auth = Guarded(phase_, [&] {
      return AliceProcessMsg3(msg.auth, net_->alice_key_, n_a_,
                              net_->directory_.bob, rng_)
          .msg4;
    });
  }
  auto payload = ApplySeparable(key_.Adjoint(), msg.payload);
  phase_ = Phase::kDone;
  return Frame(auth, std::move(payload), cfg_.auth_redundancy);
}

BobMachine::BobMachine(Network& net, const SessionConfig& cfg,
                       SeparableTransform key, std::uint64_t seed)
    : net_(&net), cfg_(cfg), key_(std::move(key)), rng_(seed) {}

QubitFrame BobMachine::OnMsg1(const QubitFrame& frame) {
  ExpectPhase(phase_, Phase::kAwaitingMsg1);
  DeframedMessage msg = DeframeOrAbort(phase_, frame, cfg_.qubit_count(), rng_);
  BitString auth;
  if (cfg_.authenticate) {
    const Msg1 m1 = Guarded(phase_, [&] {
      WireMessage wire;
      try {
        wire = DecodeWire(msg.auth);
      } catch (const std::exception& e) {
        throw ProtocolAbort(AbortReason::kBadFrame, e.what());
      }
      const auto* m = std::get_if<Msg1>(&wire);
      if (!m) {
        throw ProtocolAbort(AbortReason::kPhaseViolation,
                            "expected message 1 from the initiator");
      }
      return *m;
    });
    peer_ = m1.id_a;
    n_b_ = net_->bob_nonces_.Next();
    t_b_ = net_->bob_clock_.Now();
    auth = BuildMsg2(net_->directory_.bob, n_b_, net_->bob_key_, m1.id_a, m1.n_a,
                     net_->bob_clock_, rng_);
  }
  auto payload = ApplySeparable(key_, msg.payload);
  phase_ = Phase::kAwaitingMsg4;
  return Frame(auth, std::move(payload), cfg_.auth_redundancy);
}

BitString BobMachine::OnMsg4(const QubitFrame& frame) {
  ExpectPhase(phase_, Phase::kAwaitingMsg4);
  DeframedMessage msg = DeframeOrAbort(phase_, frame, cfg_.qubit_count(), rng_);
  if (cfg_.authenticate) {
    k_s_ = Guarded(phase_, [&] {
      return BobProcessMsg4(msg.auth, net_->bob_key_, net_->bob_clock_,
                            cfg_.window_ms, BobSessionView{peer_, n_b_},
                            net_->bob_replay_cache_);
    });
  }
  const auto clear = ApplySeparable(key_.Adjoint(), msg.payload);
  BitString x;
  try {
    x = DecodeQ(clear, cfg_.payload_redundancy, rng_);
  } catch (const FramingError& e) {
    Abort(phase_, AbortReason::kBadFrame, e.what());
  }
  phase_ = Phase::kDone;
  return x;
}

KdcMachine::KdcMachine(Network& net, const SessionConfig& cfg,
                       std::uint64_t seed)
    : net_(&net), cfg_(cfg), rng_(seed) {}

QubitFrame KdcMachine::OnMsg2(const QubitFrame& frame) {
  ExpectPhase(phase_, Phase::kAwaitingMsg2);
  DeframedMessage msg = DeframeOrAbort(phase_, frame, cfg_.qubit_count(), rng_);
  BitString auth;
  if (cfg_.authenticate) {
    auth = Guarded(phase_, [&] {
      return KdcProcessMsg2(msg.auth, net_->kdc_table_, rng_).msg3;
    });
  }
  phase_ = Phase::kDone;
  // The payload is moved across as-is; the KDC has no operation on it.
  return Frame(auth, std::move(msg.payload), cfg_.auth_redundancy);
}

std::optional<BitString> PeekAuthBits(const QubitFrame& frame) {
  Rng rng(0);
  try {
    return Deframe(frame, rng).auth;
  } catch (const FramingError&) {
    return std::nullopt;
  }
}

SessionResult RunSession(const SessionConfig& cfg, Channel& channel,
                         Network& net, RunOptions options) {
  Validate(cfg);
  SessionResult result;
  const std::size_t n = cfg.qubit_count();

  Rng alice_key_rng(DeriveSeed(cfg.seed, {kAliceKeyStream}));
  Rng bob_key_rng(DeriveSeed(cfg.seed, {kBobKeyStream}));
  SeparableTransform key_a =
      cfg.alice_key ? *cfg.alice_key : GenerateKey(n, cfg.key_policy, alice_key_rng);
  SeparableTransform key_b =
      cfg.bob_key ? *cfg.bob_key : GenerateKey(n, cfg.key_policy, bob_key_rng);
  if (!ValidateCommuting(key_a, key_b)) {
    result.outcome = Aborted{AbortReason::kNonCommutingKeys, 0, Role::kAlice,
                             "U_A and U_B do not commute slotwise"};
    return result;
  }

  AliceMachine alice(net, cfg, std::move(key_a), DeriveSeed(cfg.seed, {kAliceStream}));
  BobMachine bob(net, cfg, std::move(key_b), DeriveSeed(cfg.seed, {kBobStream}));
  KdcMachine kdc(net, cfg, DeriveSeed(cfg.seed, {kKdcStream}));

  auto send = [&](int hop, Role from, Role to, Timestamp sender_clock,
                  QubitFrame frame) {
    HopRecord rec;
    rec.hop = hop;
    rec.from = from;
    rec.to = to;
    rec.sender_clock_ms = sender_clock;
    if (options.capture_amplitudes) rec.payload_sent = frame.payload;
    Envelope delivered = channel.Transmit(Envelope{hop, from, to, std::move(frame)});
    const TapEntry& tap = channel.tap().entries().back();
    rec.sent_at_ms = tap.sent_at_ms;
    rec.delivered_at_ms = tap.delivered_at_ms;
    rec.eve_payload_bits = tap.eve_payload_bits;
    rec.substituted = tap.substituted;
    rec.auth_bits = PeekAuthBits(delivered.frame);
    rec.payload_qubits = delivered.frame.payload.size();
    if (options.capture_amplitudes) rec.payload_delivered = delivered.frame.payload;
    result.hops.push_back(std::move(rec));
    return std::move(delivered.frame);
  };

  int step = 0;
  Role at = Role::kBob;
  try {
    QubitFrame f1 = send(1, Role::kAlice, Role::kBob, alice.LocalTime(), alice.Start());
    step = 1;
    at = Role::kBob;
    QubitFrame out2 = bob.OnMsg1(f1);
    QubitFrame f2 = send(2, Role::kBob, Role::kKdc, bob.LocalTime(), std::move(out2));
    step = 2;
    at = Role::kKdc;
    QubitFrame out3 = kdc.OnMsg2(f2);
    QubitFrame f3 = send(3, Role::kKdc, Role::kAlice, kdc.LocalTime(), std::move(out3));
    step = 3;
    at = Role::kAlice;
    QubitFrame out4 = alice.OnMsg3(f3);
    QubitFrame f4 = send(4, Role::kAlice, Role::kBob, alice.LocalTime(), std::move(out4));
    step = 4;
    at = Role::kBob;
    BitString x = bob.OnMsg4(f4);
    result.qber = EstimateQber(cfg.payload, x);
    result.outcome = Recovered{std::move(x)};
  } catch (const ProtocolAbort& e) {
    result.outcome = Aborted{e.reason(), step, at, e.what()};
  }
  return result;
}

SessionResult RunSession(const SessionConfig& cfg,
                         const ChannelConfig& channel_cfg, RunOptions options) {
  Network net(NetworkConfig{DeriveSeed(cfg.seed, {kNetworkStream}), 0, 0, 0});
  Channel channel(channel_cfg, net.time());
  return RunSession(cfg, channel, net, options);
}

}  // namespace tsqp
