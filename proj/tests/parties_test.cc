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

#include "gtest/gtest.h"
#include "tsqp/attacks.h"

namespace tsqp {
namespace {

SessionConfig Config(const std::string& x, std::uint64_t seed) {
  SessionConfig cfg;
  cfg.payload = BitString::FromString(x);
  cfg.seed = seed;
  return cfg;
}

std::vector<Amplitude> Vec(const std::vector<QubitState>& reg) { return ProductState(reg); }

void ExpectClose(const std::vector<Amplitude>& a, const std::vector<Amplitude>& b) {
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_LT(std::abs(a[i] - b[i]), 1e-9) << i;
}

TEST(PartiesTest, HonestSessionRecoversPayload) {
  const SessionResult r = RunSession(Config("01101", 1), ChannelConfig{});
  ASSERT_TRUE(r.recovered()) << ToString(r.aborted()->reason);
  EXPECT_EQ(std::get<Recovered>(r.outcome).bits.ToString(), "01101");
  ASSERT_EQ(r.hops.size(), 4u);
  EXPECT_EQ(r.qber->mismatches, 0u);
  EXPECT_EQ(r.hops[1].from, Role::kBob);
  EXPECT_EQ(r.hops[1].to, Role::kKdc);
}

TEST(PartiesTest, PayloadMatchesDenseOracleOnEveryHop) {
  Rng rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    SessionConfig cfg = Config(BitString::Random(4, rng).ToString(), 100 + trial);
    cfg.alice_key = GenerateKey(4, {}, rng);
    cfg.bob_key = GenerateKey(4, {}, rng);
    const SessionResult r = RunSession(cfg, ChannelConfig{}, RunOptions{true});
    ASSERT_TRUE(r.recovered());

    const auto x = Vec(EncodeQ(cfg.payload, cfg.payload_redundancy));
    const DenseMatrix ua = Dense(*cfg.alice_key), ub = Dense(*cfg.bob_key);
    const auto hop1 = ua * std::span<const Amplitude>(x);
    const auto hop2 = ub * std::span<const Amplitude>(hop1);
    const auto hop4 = ub * std::span<const Amplitude>(x);
    ExpectClose(Vec(*r.hops[0].payload_delivered), hop1);
    ExpectClose(Vec(*r.hops[1].payload_delivered), hop2);
    ExpectClose(Vec(*r.hops[2].payload_delivered), hop2);
    ExpectClose(Vec(*r.hops[3].payload_delivered), hop4);
  }
}

TEST(PartiesTest, KdcLeavesAmplitudesBitwiseUnchanged) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const SessionResult r = RunSession(Config("1100101011", seed), ChannelConfig{},
                                       RunOptions{true});
    ASSERT_TRUE(r.recovered());
    EXPECT_EQ(*r.hops[1].payload_delivered, *r.hops[2].payload_sent);
  }
}

TEST(PartiesTest, ManySessionsAllRecover) {
  Rng rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    SessionConfig cfg;
    cfg.payload = BitString::Random(1 + UniformIndex(rng, 64), rng);
    cfg.payload_redundancy = RedundancyFactor(trial % 2 ? 3 : 1);
    cfg.seed = DeriveSeed(3, {static_cast<std::uint64_t>(trial)});
    const SessionResult r = RunSession(cfg, ChannelConfig{});
    ASSERT_TRUE(r.recovered()) << "trial " << trial;
    ASSERT_EQ(std::get<Recovered>(r.outcome).bits, cfg.payload);
  }
}

TEST(PartiesTest, BareModeRecoversWithoutAuth) {
  SessionConfig cfg = Config("1011", 4);
  cfg.authenticate = false;
  const SessionResult r = RunSession(cfg, ChannelConfig{});
  ASSERT_TRUE(r.recovered());
  for (const auto& hop : r.hops) EXPECT_TRUE(hop.auth_bits->empty());
}

TEST(PartiesTest, MixedPolicySessionsRecover) {
  int recovered = 0, rejected = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    SessionConfig cfg = Config("10110", seed);
    cfg.key_policy.mode = KeyMode::kMixedValidated;
    const SessionResult r = RunSession(cfg, ChannelConfig{});
    if (r.recovered()) {
      ++recovered;
      EXPECT_EQ(std::get<Recovered>(r.outcome).bits, cfg.payload);
    } else {
      ++rejected;
      EXPECT_EQ(r.aborted()->reason, AbortReason::kNonCommutingKeys);
      EXPECT_EQ(r.aborted()->step, 0);
      EXPECT_TRUE(r.hops.empty());
    }
  }
  EXPECT_GT(recovered, 0);
  EXPECT_GT(rejected, 0);
}

TEST(PartiesTest, NonCommutingKeysAreRejectedBeforeHopOne) {
  SessionConfig cfg = Config("1", 5);
  cfg.alice_key = SeparableTransform({SlotFactor::PauliX()});
  cfg.bob_key = SeparableTransform({SlotFactor::PauliY()});
  const SessionResult r = RunSession(cfg, ChannelConfig{});
  ASSERT_FALSE(r.recovered());
  EXPECT_EQ(r.aborted()->reason, AbortReason::kNonCommutingKeys);
}

TEST(PartiesTest, ConfigValidation) {
  SessionConfig empty;
  EXPECT_THROW(RunSession(empty, ChannelConfig{}), std::invalid_argument);
  SessionConfig bad_key = Config("101", 6);
  Rng rng(6);
  bad_key.alice_key = GenerateKey(2, {}, rng);
  EXPECT_THROW(RunSession(bad_key, ChannelConfig{}), std::invalid_argument);
}

TEST(PartiesTest, OutOfOrderMessagesArePhaseViolations) {
  Network net(NetworkConfig{7});
  const SessionConfig cfg = Config("101", 7);
  Rng rng(7);
  AliceMachine alice(net, cfg, GenerateKey(3, {}, rng), 1);
  BobMachine bob(net, cfg, GenerateKey(3, {}, rng), 2);
  KdcMachine kdc(net, cfg, 3);

  const QubitFrame f1 = alice.Start();
  try {
    bob.OnMsg4(f1);
    FAIL() << "no abort";
  } catch (const ProtocolAbort& e) {
    EXPECT_EQ(e.reason(), AbortReason::kPhaseViolation);
  }
  EXPECT_EQ(bob.phase(), Phase::kAborted);

  try {
    alice.Start();
    FAIL() << "no abort";
  } catch (const ProtocolAbort& e) {
    EXPECT_EQ(e.reason(), AbortReason::kPhaseViolation);
  }

  // A message 1 handed to the KDC carries the wrong kind.
  try {
    kdc.OnMsg2(f1);
    FAIL() << "no abort";
  } catch (const ProtocolAbort& e) {
    EXPECT_EQ(e.reason(), AbortReason::kPhaseViolation);
  }
  EXPECT_EQ(kdc.phase(), Phase::kAborted);
}

TEST(PartiesTest, WrongPayloadSizeIsBadFrame) {
  Network net(NetworkConfig{8});
  Rng rng(8);
  const SessionConfig cfg = Config("101", 8);
  AliceMachine alice(net, Config("1011", 8), GenerateKey(4, {}, rng), 1);
  BobMachine bob(net, cfg, GenerateKey(3, {}, rng), 2);
  try {
    bob.OnMsg1(alice.Start());
    FAIL() << "no abort";
  } catch (const ProtocolAbort& e) {
    EXPECT_EQ(e.reason(), AbortReason::kBadFrame);
  }
}

TEST(PartiesTest, ClockSkewOnAliceAndKdcIsHarmless) {
  for (std::int64_t skew : {-1'000'000LL, 1'000'000LL}) {
    Network net(NetworkConfig{9, skew, 0, -skew});
    Channel channel(ChannelConfig{}, net.time());
    for (std::uint64_t s = 0; s < 20; ++s) {
      const SessionResult r = RunSession(Config("110", s), channel, net);
      ASSERT_TRUE(r.recovered()) << ToString(r.aborted()->reason);
    }
  }
}

TEST(PartiesTest, HopTimesFollowLatency) {
  const SessionResult r = RunSession(Config("1", 10), ChannelConfig{});
  ASSERT_EQ(r.hops.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(r.hops[i].sent_at_ms, kEpochMs + kHopLatencyMs * i);
    EXPECT_EQ(r.hops[i].delivered_at_ms, kEpochMs + kHopLatencyMs * (i + 1));
  }
}

TEST(PartiesTest, SuppressionBeyondWindowIsStale) {
  // T_b is stamped on hop 1 delivery; three more hops of latency follow.
  const std::uint64_t slack = kDefaultWindowMs - 3 * kHopLatencyMs;
  for (std::uint64_t delay : {slack, slack + 1}) {
    ChannelConfig ch;
    ch.adversary = AdversaryKind::kSuppressReplay;
    ch.target_hop = 4;
    ch.delay_ms = delay;
    const SessionResult r = RunSession(Config("1010", 11), ch);
    if (delay == slack) {
      EXPECT_TRUE(r.recovered());
    } else {
      ASSERT_FALSE(r.recovered());
      EXPECT_EQ(r.aborted()->reason, AbortReason::kStaleTimestamp);
      EXPECT_EQ(r.aborted()->step, 4);
    }
  }
}

TEST(PartiesTest, ReplayedFramesAreRejected) {
  const std::pair<int, AbortReason> cases[] = {
      {3, AbortReason::kReplayOrForgery},
      {4, AbortReason::kReplay},
  };
  for (const auto& [hop, reason] : cases) {
    Network net(NetworkConfig{12});
    const RecordedSession rec = RecordSession(Config("0110", 1), net);
    ASSERT_TRUE(rec.result.recovered());
    const SessionResult r = ReplayAttack(rec.tap, hop, Config("0110", 2), net);
    ASSERT_FALSE(r.recovered()) << "hop " << hop;
    EXPECT_EQ(r.aborted()->reason, reason) << "hop " << hop;
    EXPECT_TRUE(r.hops[static_cast<std::size_t>(hop - 1)].substituted);
  }
}

}  // namespace
}  // namespace tsqp
