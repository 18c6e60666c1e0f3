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
 * Active-adversary harnesses built on top of the session state machines.
 *
 * Eve controls every hop but holds no master key. Her inputs are frames,
 * tap logs and the public directory of principal IDs; nothing in this
 * header accepts a MasterKey, SessionKey or a party's transform.
 */

#include <cstdint>
#include <optional>
#include <vector>

#include "tsqp/auth.h"
#include "tsqp/channel.h"
#include "tsqp/encoding.h"
#include "tsqp/parties.h"
#include "tsqp/transforms.h"

namespace tsqp {

/// The adversary's own state: her transforms, randomness and public
/// knowledge.
class Eve {
 public:
  Eve(PublicDirectory directory, std::uint64_t seed);

  const PublicDirectory& directory() const noexcept { return directory_; }
  Rng& rng() noexcept { return rng_; }

  /// Fresh rotation key of the given width, kept by Eve.
  const SeparableTransform& NewKey(std::size_t n);
  const std::optional<SeparableTransform>& key() const noexcept { return key_; }

  /// Random bytes shaped like a sealed record of the given plaintext size.
  SealedRecord ForgeSealed(std::size_t plaintext_size);
  Nonce FreshNonce() { return Nonce::Random(rng_); }

 private:
  PublicDirectory directory_;
  Rng rng_;
  std::optional<SeparableTransform> key_;
};

/// How Eve, posing as Bob, tries to hand Alice a message 3.
enum class AliceSideTactic {
  /// Sends the KDC a ticket request she cannot seal.
  kForgeTicketReq,
  /// Sends Alice a fabricated package.
  kForgePackage,
  /// Relays the KDC's answer from her own run against Bob.
  kRelayForeignPackage,
};

/// How Eve, posing as Alice, tries to finish Bob's run.
enum class BobSideTactic {
  /// Forwards the genuine ticket but cannot seal the confirmation.
  kForgeConfirm,
  /// Fabricates the ticket as well.
  kForgeTicket,
};

struct MitmOutcome {
  /// Eve decoded X by getting Alice to strip U_A from Eve's own transform.
  bool eve_recovered = false;
  std::optional<BitString> eve_bits;
  /// First abort on the run where Eve poses as Bob toward Alice.
  std::optional<Aborted> alice_side_abort;
  /// First abort on the run where Eve poses as Alice toward Bob.
  std::optional<Aborted> bob_side_abort;
  /// Bob accepted a message that Eve injected in Alice's name.
  bool bob_accepted_impostor = false;
  AliceSideTactic alice_tactic = AliceSideTactic::kForgePackage;
  BobSideTactic bob_tactic = BobSideTactic::kForgeConfirm;
  std::vector<HopRecord> hops;

  /// Some honest principal aborted on each side Eve attacked.
  bool honest_aborted() const noexcept {
    return alice_side_abort.has_value() && bob_side_abort.has_value();
  }
};

/// Eve impersonates Bob to Alice and Alice to Bob over one network. With
/// cfg.authenticate == false this is the bare three-pass exchange and Eve
/// completes both runs. Tactics are drawn from Eve's randomness.
MitmOutcome MitmAttack(const SessionConfig& cfg, std::uint64_t eve_seed);

/// An honest session together with everything its channel carried.
struct RecordedSession {
  SessionResult result;
  TapLog tap;
};
RecordedSession RecordSession(const SessionConfig& cfg, Network& net);

/// Runs a fresh session on `net` in which the channel substitutes the frame
/// recorded on `replay_hop` for the one actually sent.
SessionResult ReplayAttack(const TapLog& recorded, int replay_hop,
                           const SessionConfig& fresh_cfg, Network& net,
                           RunOptions options = {});

}  // namespace tsqp
