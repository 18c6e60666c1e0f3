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

#include "tsqp/attacks.h"

namespace tsqp {
namespace {

enum : std::uint64_t {
  kMitmNetwork = 0x30,
  kMitmAliceKey,
  kMitmBobKey,
  kMitmAlice,
  kMitmBob,
  kMitmKdcBobSide,
  kMitmKdcAliceSide,
};

// Plaintext sizes of the records Eve imitates: tag byte plus fields.
constexpr std::size_t kTicketReqPlain = 1 + 8 + 16 + 8;
constexpr std::size_t kPackageAPlain = 1 + 8 + 16 + 32 + 8;
constexpr std::size_t kTicketBPlain = 1 + 8 + 32 + 8;
constexpr std::size_t kConfirmPlain = 1 + 16;

class HopLog {
 public:
  HopLog(std::vector<HopRecord>& out, SimulatedTime& time)
      : out_(&out), time_(&time) {}

  // Eve sits on every link, so each hop is one channel traversal.
  QubitFrame Pass(int hop, Role from, Role to, Timestamp sender_clock,
                  QubitFrame frame) {
    HopRecord rec;
    rec.hop = hop;
    rec.from = from;
    rec.to = to;
    rec.sender_clock_ms = sender_clock;
    rec.sent_at_ms = time_->now();
    time_->Advance(kHopLatencyMs);
    rec.delivered_at_ms = time_->now();
    rec.auth_bits = PeekAuthBits(frame);
    rec.payload_qubits = frame.payload.size();
    out_->push_back(std::move(rec));
    return frame;
  }

 private:
  std::vector<HopRecord>* out_;
  SimulatedTime* time_;
};

// step and at are read when the abort fires.
template <typename F>
std::optional<Aborted> CatchAbort(const int& step, const Role& at, F&& f) {
  try {
    f();
  } catch (const ProtocolAbort& e) {
    return Aborted{e.reason(), step, at, e.what()};
  }
  return std::nullopt;
}

}  // namespace

Eve::Eve(PublicDirectory directory, std::uint64_t seed)
    : directory_(directory), rng_(seed) {}

const SeparableTransform& Eve::NewKey(std::size_t n) {
  key_ = GenerateKey(n, KeyPolicy{KeyMode::kRotationsOnly}, rng_);
  return *key_;
}

SealedRecord Eve::ForgeSealed(std::size_t plaintext_size) {
  SealedRecord out;
  out.bytes.resize(SealedRecord::kIvSize + plaintext_size + SealedRecord::kTagSize);
  FillRandom(rng_, out.bytes);
  return out;
}

MitmOutcome MitmAttack(const SessionConfig& cfg, std::uint64_t eve_seed) {
  Validate(cfg);
  MitmOutcome outcome;
  Network net(NetworkConfig{DeriveSeed(cfg.seed, {kMitmNetwork}), 0, 0, 0});
  Eve eve(net.directory(), eve_seed);
  HopLog log(outcome.hops, net.time());

  const std::size_t n = cfg.qubit_count();
  const auto r_auth = cfg.auth_redundancy;
  Rng alice_key_rng(DeriveSeed(cfg.seed, {kMitmAliceKey}));
  Rng bob_key_rng(DeriveSeed(cfg.seed, {kMitmBobKey}));
  AliceMachine alice(net, cfg,
                     cfg.alice_key ? *cfg.alice_key
                                   : GenerateKey(n, cfg.key_policy, alice_key_rng),
                     DeriveSeed(cfg.seed, {kMitmAlice}));
  BobMachine bob(net, cfg,
                 cfg.bob_key ? *cfg.bob_key : GenerateKey(n, cfg.key_policy, bob_key_rng),
                 DeriveSeed(cfg.seed, {kMitmBob}));

  outcome.alice_tactic = static_cast<AliceSideTactic>(UniformIndex(eve.rng(), 3));
  outcome.bob_tactic = static_cast<BobSideTactic>(UniformIndex(eve.rng(), 2));

  // Posing as Alice toward Bob, with a message of Eve's choosing.
  const BitString fake = BitString::Random(cfg.payload.size(), eve.rng());
  const SeparableTransform toward_bob = eve.NewKey(n);
  const Nonce n_e = eve.FreshNonce();
  std::optional<Msg3Wire> kdc_answer;
  int bob_step = 1;
  Role bob_at = Role::kBob;
  outcome.bob_side_abort = CatchAbort(bob_step, bob_at, [&] {
    BitString auth = cfg.authenticate ? BuildMsg1(eve.directory().alice, n_e) : BitString{};
    auto payload = ApplySeparable(toward_bob, EncodeQ(fake, cfg.payload_redundancy));
    QubitFrame f1 = log.Pass(1, Role::kEve, Role::kBob, 0,
                             Frame(auth, std::move(payload), r_auth));
    QubitFrame f2 = log.Pass(2, Role::kBob, Role::kEve, bob.LocalTime(), bob.OnMsg1(f1));

    QubitFrame f3;
    if (cfg.authenticate) {
      // Bob's request is genuine, so Eve lets the KDC answer it.
      KdcMachine kdc(net, cfg, DeriveSeed(cfg.seed, {kMitmKdcBobSide}));
      log.Pass(2, Role::kEve, Role::kKdc, 0, f2);
      bob_step = 2;
      bob_at = Role::kKdc;
      f3 = log.Pass(3, Role::kKdc, Role::kEve, kdc.LocalTime(), kdc.OnMsg2(f2));
    } else {
      f3 = f2;
    }

    Rng peek(0);
    const DeframedMessage m3 = Deframe(f3, peek);
    BitString auth4;
    if (cfg.authenticate) {
      kdc_answer = std::get<Msg3Wire>(DecodeWire(m3.auth));
      Msg4Wire forged;
      forged.ticket_b = outcome.bob_tactic == BobSideTactic::kForgeTicket
                            ? eve.ForgeSealed(kTicketBPlain)
                            : kdc_answer->ticket_b;
      forged.confirm = eve.ForgeSealed(kConfirmPlain);
      auth4 = EncodeWire(forged);
    }
    auto payload4 = ApplySeparable(toward_bob.Adjoint(), m3.payload);
    QubitFrame f4 = log.Pass(4, Role::kEve, Role::kBob, 0,
                             Frame(auth4, std::move(payload4), r_auth));
    bob_step = 4;
    bob_at = Role::kBob;
    bob.OnMsg4(f4);
    outcome.bob_accepted_impostor = true;
  });

  // Posing as Bob toward Alice.
  const SeparableTransform toward_alice = eve.NewKey(n);
  int alice_step = 3;
  Role alice_at = Role::kAlice;
  outcome.alice_side_abort = [&]() -> std::optional<Aborted> {
    try {
      QubitFrame f1 = log.Pass(1, Role::kAlice, Role::kEve, alice.LocalTime(), alice.Start());
      Rng peek(0);
      const DeframedMessage m1 = Deframe(f1, peek);
      auto wrapped = ApplySeparable(toward_alice, m1.payload);

      BitString auth3;
      if (cfg.authenticate) {
        switch (outcome.alice_tactic) {
          case AliceSideTactic::kForgeTicketReq: {
            alice_step = 2;
            alice_at = Role::kKdc;
            Msg2Wire req{eve.directory().bob, eve.FreshNonce(),
                         eve.ForgeSealed(kTicketReqPlain)};
            KdcMachine kdc(net, cfg, DeriveSeed(cfg.seed, {kMitmKdcAliceSide}));
            QubitFrame f2 = log.Pass(2, Role::kEve, Role::kKdc, 0,
                                     Frame(EncodeWire(req), wrapped, r_auth));
            QubitFrame f3 =
                log.Pass(3, Role::kKdc, Role::kEve, kdc.LocalTime(), kdc.OnMsg2(f2));
            // Not reached unless the KDC accepted the forgery.
            auth3 = PeekAuthBits(f3).value_or(BitString{});
            alice_step = 3;
            alice_at = Role::kAlice;
            break;
          }
          case AliceSideTactic::kForgePackage: {
            Msg3Wire forged{eve.ForgeSealed(kPackageAPlain),
                            eve.ForgeSealed(kTicketBPlain), eve.FreshNonce()};
            auth3 = EncodeWire(forged);
            break;
          }
          case AliceSideTactic::kRelayForeignPackage: {
            Msg3Wire relay = kdc_answer
                                 ? *kdc_answer
                                 : Msg3Wire{eve.ForgeSealed(kPackageAPlain),
                                            eve.ForgeSealed(kTicketBPlain),
                                            eve.FreshNonce()};
            auth3 = EncodeWire(relay);
            break;
          }
        }
      }
      QubitFrame f3 = log.Pass(3, Role::kEve, Role::kAlice, 0,
                               Frame(auth3, std::move(wrapped), r_auth));
      QubitFrame f4 = log.Pass(4, Role::kAlice, Role::kEve, alice.LocalTime(), alice.OnMsg3(f3));
      const DeframedMessage m4 = Deframe(f4, peek);
      BitString bits = DecodeQ(ApplySeparable(toward_alice.Adjoint(), m4.payload),
                               cfg.payload_redundancy, eve.rng());
      outcome.eve_recovered = bits == cfg.payload;
      outcome.eve_bits = std::move(bits);
    } catch (const ProtocolAbort& e) {
      return Aborted{e.reason(), alice_step, alice_at, e.what()};
    }
    return std::nullopt;
  }();
  return outcome;
}

RecordedSession RecordSession(const SessionConfig& cfg, Network& net) {
  Channel channel(ChannelConfig{}, net.time());
  RecordedSession out;
  out.result = RunSession(cfg, channel, net);
  out.tap = channel.TakeTap();
  return out;
}

SessionResult ReplayAttack(const TapLog& recorded, int replay_hop,
                           const SessionConfig& fresh_cfg, Network& net,
                           RunOptions options) {
  ChannelConfig ccfg;
  ccfg.adversary = AdversaryKind::kReplay;
  ccfg.target_hop = replay_hop;
  Channel channel(ccfg, net.time(), &recorded);
  return RunSession(fresh_cfg, channel, net, options);
}

}  // namespace tsqp
