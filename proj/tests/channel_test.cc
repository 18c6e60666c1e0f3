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

#include "tsqp/channel.h"

#include <cmath>
#include <numbers>
#include <set>
#include <type_traits>

#include "gtest/gtest.h"
#include "tsqp/attacks.h"

namespace tsqp {
namespace {

// The adversary surface never accepts key material.
static_assert(!std::is_constructible_v<Eve, MasterKey>);
static_assert(!std::is_constructible_v<Eve, PublicDirectory, MasterKey>);
static_assert(!std::is_constructible_v<Channel, ChannelConfig, MasterKey>);
static_assert(!std::is_constructible_v<Channel, ChannelConfig, SimulatedTime&, MasterKey>);
static_assert(!std::is_copy_constructible_v<Network>);

QubitFrame SampleFrame(Rng& rng, std::size_t payload) {
  std::vector<QubitState> q;
  for (std::size_t i = 0; i < payload; ++i) q.push_back(RandomState(rng));
  return Frame(BitString::Random(24, rng), std::move(q), RedundancyFactor(3));
}

TEST(ChannelTest, PassThroughIsIdentity) {
  Rng rng(1);
  SimulatedTime time(100);
  Channel ch(ChannelConfig{}, time);
  const QubitFrame f = SampleFrame(rng, 8);
  const Envelope out = ch.Transmit(Envelope{1, Role::kAlice, Role::kBob, f});
  EXPECT_EQ(out.frame, f);
  EXPECT_EQ(time.now(), 100 + kHopLatencyMs);
  ASSERT_EQ(ch.tap().entries().size(), 1u);
  EXPECT_EQ(ch.tap().FindHop(1)->sent_at_ms, 100u);
  EXPECT_EQ(ch.tap().FindHop(2), nullptr);
}

TEST(ChannelTest, FullFlipNoiseFlipsEveryQubit) {
  Rng rng(2);
  const QubitFrame f = SampleFrame(rng, 6);
  const QubitFrame g = ApplyFlipNoise(f, 1.0, rng);
  ASSERT_EQ(g.payload.size(), f.payload.size());
  for (std::size_t i = 0; i < f.payload.size(); ++i) {
    EXPECT_EQ(g.payload[i].alpha(), f.payload[i].beta());
    EXPECT_EQ(g.payload[i].beta(), f.payload[i].alpha());
  }
  for (std::size_t i = 0; i < f.auth.size(); ++i) EXPECT_EQ(g.auth[i], FlipBit(f.auth[i]));
  EXPECT_EQ(ApplyFlipNoise(f, 0.0, rng), f);
}

TEST(ChannelTest, ValidateRejectsBadConfig) {
  ChannelConfig c;
  c.flip_noise_p = 1.5;
  EXPECT_THROW(Validate(c), std::invalid_argument);
  c.flip_noise_p = 0.1;
  c.target_hop = 5;
  EXPECT_THROW(Validate(c), std::invalid_argument);
}

TEST(ChannelTest, QberFixture) {
  const auto sent = BitString::FromString("000000000000");
  const auto got = BitString::FromString("100000010001");
  const QberReport r = EstimateQber(sent, got);
  EXPECT_EQ(r.compared, 12u);
  EXPECT_EQ(r.mismatches, 3u);
  EXPECT_DOUBLE_EQ(r.rate, 0.25);
  EXPECT_THROW(EstimateQber(sent, BitString::FromString("1")), std::invalid_argument);
}

TEST(ChannelTest, InterceptLeavesBasisStatesAndAuthAlone) {
  Rng rng(3);
  const BitString x = BitString::Random(32, rng);
  const QubitFrame f = Frame(BitString::Random(16, rng), EncodeQ(x, RedundancyFactor(1)),
                             RedundancyFactor(3));
  const InterceptResult r = InterceptResend(f, rng);
  EXPECT_EQ(r.frame, f);
  EXPECT_EQ(r.observed, x);
}

TEST(ChannelTest, InterceptCollapsesSuperpositions) {
  Rng rng(4);
  const QubitState plus = Apply(Unitary2::Rotation(std::numbers::pi / 4), QubitState::Zero());
  const QubitFrame f = Frame({}, std::vector<QubitState>(64, plus), RedundancyFactor(1));
  const InterceptResult r = InterceptResend(f, rng);
  for (std::size_t i = 0; i < 64; ++i) {
    EXPECT_EQ(r.frame.payload[i], QubitState::Basis(r.observed[i]));
  }
  EXPECT_EQ(r.frame.header, f.header);
}

TEST(ChannelTest, InterceptOnlyTouchesTargetHop) {
  for (int target = 1; target <= 4; ++target) {
    ChannelConfig c;
    c.adversary = AdversaryKind::kInterceptResend;
    c.target_hop = target;
    const SessionResult r = RunSession(
        [] {
          SessionConfig s;
          s.payload = BitString::FromString("1100110011");
          s.seed = 5;
          return s;
        }(),
        c);
    ASSERT_EQ(r.hops.size(), 4u);
    for (const auto& hop : r.hops) {
      EXPECT_EQ(hop.eve_payload_bits.has_value(), hop.hop == target);
    }
  }
}

TEST(ChannelTest, QberGrowsWithNoise) {
  double previous = -1.0;
  for (double p : {0.0, 0.005, 0.01, 0.02}) {
    double sum = 0.0;
    int counted = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      SessionConfig s;
      Rng rng(seed);
      s.payload = BitString::Random(32, rng);
      s.seed = seed;
      s.authenticate = false;
      ChannelConfig c;
      c.flip_noise_p = p;
      c.seed = seed;
      const SessionResult r = RunSession(s, c);
      if (r.recovered()) {
        sum += r.qber->rate;
        ++counted;
      }
    }
    ASSERT_GT(counted, 20);
    const double mean = sum / counted;
    EXPECT_GT(mean, previous) << "p=" << p;
    previous = mean;
  }
}

TEST(ChannelTest, RoleAndAdversaryNames) {
  EXPECT_EQ(ToString(Role::kKdc), "KDC");
  EXPECT_EQ(ToString(AdversaryKind::kInterceptResend), "eavesdrop");
  EXPECT_EQ(ToString(AdversaryKind::kSuppressReplay), "suppress");
}

TEST(AttacksTest, BareExchangeFallsToImpersonation) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    SessionConfig s;
    Rng rng(seed);
    s.payload = BitString::Random(16, rng);
    s.seed = seed;
    s.authenticate = false;
    const MitmOutcome m = MitmAttack(s, seed + 1000);
    EXPECT_TRUE(m.eve_recovered);
    EXPECT_TRUE(m.bob_accepted_impostor);
    EXPECT_FALSE(m.honest_aborted());
  }
}

TEST(AttacksTest, AuthenticatedExchangeResistsImpersonation) {
  const std::set<AbortReason> allowed = {
      AbortReason::kBadTicketReq, AbortReason::kBadPackage, AbortReason::kBadTicket,
      AbortReason::kBadConfirm, AbortReason::kReplayOrForgery};
  std::set<AbortReason> seen;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    SessionConfig s;
    Rng rng(seed);
    s.payload = BitString::Random(16, rng);
    s.seed = seed;
    const MitmOutcome m = MitmAttack(s, seed + 1000);
    EXPECT_FALSE(m.eve_recovered);
    EXPECT_FALSE(m.bob_accepted_impostor);
    ASSERT_TRUE(m.honest_aborted());
    EXPECT_TRUE(allowed.contains(m.alice_side_abort->reason))
        << ToString(m.alice_side_abort->reason);
    EXPECT_TRUE(allowed.contains(m.bob_side_abort->reason))
        << ToString(m.bob_side_abort->reason);
    seen.insert(m.alice_side_abort->reason);
    seen.insert(m.bob_side_abort->reason);
  }
  EXPECT_EQ(seen, allowed);
}

}  // namespace
}  // namespace tsqp
